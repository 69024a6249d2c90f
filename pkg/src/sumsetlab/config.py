"""Process-wide resource limits for dense group representations."""

from __future__ import annotations

import os

DEFAULT_ORDER_CAP = 1 << 26
ENV_ORDER_CAP = "SUMSETLAB_ORDER_CAP"


class OrderCapError(ValueError):
    """Requested group exceeds the configured element cap."""


def _cap_from_env() -> int:
    raw = os.environ.get(ENV_ORDER_CAP)
    if raw is None:
        return DEFAULT_ORDER_CAP
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"{ENV_ORDER_CAP} must be an integer, got {raw!r}") from exc
    if value < 2:
        raise ValueError(f"{ENV_ORDER_CAP} must be >= 2, got {value}")
    return value


_order_cap = _cap_from_env()


def order_cap() -> int:
    return _order_cap


def set_order_cap(value: int) -> None:
    """Override the cap on group order (element count, not bytes)."""
    global _order_cap
    value = int(value)
    if value < 2:
        raise ValueError(f"order cap must be >= 2, got {value}")
    _order_cap = value


def check_order(order: int, what: str) -> None:
    if order > _order_cap:
        raise OrderCapError(
            f"{what} has {order} elements, above the cap of {_order_cap}; "
            f"raise it with set_order_cap() or ${ENV_ORDER_CAP}"
        )
