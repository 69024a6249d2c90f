"""Dense subsets of a finite Abelian group and the sumset kernel.

A set is an immutable Python-int bitmask over element indices (bit i set
iff element i is a member), so unions and translates run word-parallel on
CPython's big-int limbs.  ``sumset`` iterates the members of the smaller
operand and ORs whole-set translates of the larger one; one translate is a
handful of shift/mask passes per coordinate axis.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .groups import GroupSpec, check_index, decode, encode

# Per-spec translate-mask bytes kept around before falling back to
# on-the-fly construction.
_MASK_CACHE_BYTES = 32 << 20

_BYTE_BITS = [tuple(j for j in range(8) if (v >> j) & 1) for v in range(256)]


class SpecMismatchError(ValueError):
    """Operands live over different group specs."""


def _bit_indices(bits: int, nbytes: int) -> list[int]:
    out: list[int] = []
    if bits == 0:
        return out
    for i, byte in enumerate(bits.to_bytes(nbytes, "little")):
        if byte:
            base = i << 3
            out.extend(base + j for j in _BYTE_BITS[byte])
    return out


class _Axis:
    __slots__ = ("width", "modulus", "block", "nblocks", "replicator")

    def __init__(self, width: int, modulus: int, order: int) -> None:
        self.width = width
        self.modulus = modulus
        self.block = width * modulus
        self.nblocks = order // self.block
        # Ones at every block base; low-mask for j bits is ((1<<j)-1)*replicator.
        if self.nblocks == 1:
            self.replicator = 1
        else:
            self.replicator = ((1 << order) - 1) // ((1 << self.block) - 1)


class _Kernel:
    """Per-spec constants for the translate kernel, cached by spec."""

    __slots__ = ("order", "nbytes", "full", "axes", "_masks", "_mask_bytes")

    def __init__(self, spec: GroupSpec) -> None:
        self.order = spec.order
        self.nbytes = (spec.order + 7) >> 3
        self.full = (1 << spec.order) - 1
        self.axes = tuple(
            _Axis(w, d, spec.order) for w, d in zip(spec.weights, spec.factors)
        )
        self._masks: dict[tuple[int, int], int] = {}
        self._mask_bytes = 0

    def _rep_mask(self, axis_i: int, nbits: int) -> int:
        key = (axis_i, nbits)
        mask = self._masks.get(key)
        if mask is None:
            mask = ((1 << nbits) - 1) * self.axes[axis_i].replicator
            if self._mask_bytes + (self.order >> 3) <= _MASK_CACHE_BYTES:
                self._masks[key] = mask
                self._mask_bytes += self.order >> 3
        return mask

    def translate(self, bits: int, coords: Sequence[int]) -> int:
        """Rotate the bitmask by ``coords``: bit(x) moves to bit(x + g)."""
        for i, t in enumerate(coords):
            if not t:
                continue
            ax = self.axes[i]
            up = t * ax.width
            down = ax.block - up
            if ax.nblocks == 1:
                bits = ((bits & ((1 << down) - 1)) << up) | (bits >> down)
            else:
                bits = ((bits & self._rep_mask(i, down)) << up) | (
                    (bits >> down) & self._rep_mask(i, up)
                )
        return bits


@lru_cache(maxsize=256)
def _kernel(spec: GroupSpec) -> _Kernel:
    return _Kernel(spec)


@dataclass(frozen=True)
class GroupSet:
    """An immutable bit-indexed subset of a GroupSpec's elements."""

    spec: GroupSpec
    bits: int
    card: int = field(init=False, compare=False)

    def __post_init__(self) -> None:
        if self.bits < 0 or self.bits >> self.spec.order:
            raise ValueError(f"bitmask has bits outside [0, {self.spec.order})")
        object.__setattr__(self, "card", self.bits.bit_count())

    @classmethod
    def empty(cls, spec: GroupSpec) -> GroupSet:
        return cls(spec, 0)

    @classmethod
    def full(cls, spec: GroupSpec) -> GroupSet:
        return cls(spec, (1 << spec.order) - 1)

    @classmethod
    def identity(cls, spec: GroupSpec) -> GroupSet:
        return cls(spec, 1)

    @classmethod
    def from_indices(cls, spec: GroupSpec, indices: Iterable[int]) -> GroupSet:
        bits = 0
        for x in indices:
            bits |= 1 << check_index(spec, x)
        return cls(spec, bits)

    @classmethod
    def from_coords(cls, spec: GroupSpec, coords: Iterable[Iterable[int]]) -> GroupSet:
        return cls.from_indices(spec, (encode(spec, c) for c in coords))

    def indices(self) -> list[int]:
        return _bit_indices(self.bits, _kernel(self.spec).nbytes)

    def coords(self) -> list[tuple[int, ...]]:
        return [decode(self.spec, x) for x in self.indices()]

    def __contains__(self, x: int) -> bool:
        return 0 <= x < self.spec.order and bool((self.bits >> x) & 1)

    def __iter__(self) -> Iterator[int]:
        return iter(self.indices())

    def __len__(self) -> int:
        return self.card

    def __repr__(self) -> str:
        return f"GroupSet({self.spec}, card={self.card})"


@dataclass(frozen=True)
class ElementMultiset:
    """A multiset of group elements as (index, multiplicity) entries."""

    spec: GroupSpec
    entries: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        merged: dict[int, int] = {}
        for x, mult in self.entries:
            x = check_index(self.spec, x)
            mult = int(mult)
            if mult < 1:
                raise ValueError(f"multiplicity must be >= 1, got {mult} for index {x}")
            merged[x] = merged.get(x, 0) + mult
        object.__setattr__(self, "entries", tuple(sorted(merged.items())))

    @classmethod
    def from_indices(cls, spec: GroupSpec, indices: Iterable[int]) -> ElementMultiset:
        return cls(spec, tuple((int(x), 1) for x in indices))

    @classmethod
    def from_coords(cls, spec: GroupSpec, coords: Iterable[Iterable[int]]) -> ElementMultiset:
        return cls.from_indices(spec, (encode(spec, c) for c in coords))

    @property
    def size(self) -> int:
        """Total number of elements counted with multiplicity."""
        return sum(m for _, m in self.entries)

    def expand(self) -> list[int]:
        out: list[int] = []
        for x, mult in self.entries:
            out.extend([x] * mult)
        return out

    def coords(self) -> list[tuple[int, ...]]:
        return [decode(self.spec, x) for x in self.expand()]

    def union(self, other: ElementMultiset) -> ElementMultiset:
        """Multiset union with multiplicities added."""
        _same_spec(self.spec, other.spec)
        return ElementMultiset(self.spec, self.entries + other.entries)


def _same_spec(a: GroupSpec, b: GroupSpec) -> None:
    if a != b:
        raise SpecMismatchError(f"operands live over different groups: {a} vs {b}")


def translate(a: GroupSet, g: int) -> GroupSet:
    """The translate ``{x + g : x in A}``; cardinality is preserved."""
    coords = decode(a.spec, g)
    return GroupSet(a.spec, _kernel(a.spec).translate(a.bits, coords))


def _sum_bits(spec: GroupSpec, xbits: int, ybits: int) -> int:
    if xbits == 0 or ybits == 0:
        return 0
    if xbits.bit_count() > ybits.bit_count():
        xbits, ybits = ybits, xbits
    kern = _kernel(spec)
    acc = 0
    for g in _bit_indices(xbits, kern.nbytes):
        acc |= kern.translate(ybits, decode(spec, g))
        if acc == kern.full:
            break
    return acc


def sumset(a: GroupSet, b: GroupSet) -> GroupSet:
    """The sumset ``{x + y : x in A, y in B}``; empty if either input is."""
    _same_spec(a.spec, b.spec)
    return GroupSet(a.spec, _sum_bits(a.spec, a.bits, b.bits))


def m_fold(a: GroupSet, m: int) -> GroupSet:
    """The m-fold sumset ``A + ... + A`` (m copies) by binary doubling.

    ``m == 0`` gives the identity singleton; the computation exits early
    with the full group as soon as an intermediate covers it, since the
    full group is absorbing under sumsets with nonempty sets.
    """
    m = int(m)
    if m < 0:
        raise ValueError(f"fold count must be >= 0, got {m}")
    spec = a.spec
    if m == 0:
        return GroupSet.identity(spec)
    if m == 1 or a.card == 0:
        return a
    full = _kernel(spec).full
    result = 0
    base = a.bits
    while True:
        if m & 1:
            result = base if result == 0 else _sum_bits(spec, result, base)
            if result == full:
                return GroupSet.full(spec)
        m >>= 1
        if not m:
            return GroupSet(spec, result)
        base = _sum_bits(spec, base, base)
        if base == full:
            # At least one doubling remains to be folded in, and G absorbs.
            return GroupSet.full(spec)


def subset_sums(b: ElementMultiset) -> GroupSet:
    """The subset-sum closure: all sums over sub-multisets of B.

    Folds ``S <- S | (S + x)`` over every copy of every entry, starting
    from the identity (the empty sum); the result is fold-order
    independent.
    """
    spec = b.spec
    kern = _kernel(spec)
    bits = 1
    for x, mult in b.entries:
        coords = decode(spec, x)
        for _ in range(mult):
            new = bits | kern.translate(bits, coords)
            if new == bits:
                break  # fixpoint: further copies of x cannot add elements
            bits = new
            if bits == kern.full:
                return GroupSet.full(spec)
    return GroupSet(spec, bits)


def is_cover(a: GroupSet) -> bool:
    """True iff the set is the whole group."""
    return a.card == a.spec.order


def set_to_json(a: GroupSet, form: str = "bitmask") -> dict:
    """Serialize a set to the interchange dict (see ``set_from_json``)."""
    if form == "bitmask":
        nbytes = _kernel(a.spec).nbytes
        return {"bitmask_hex": a.bits.to_bytes(nbytes, "little").hex()}
    if form == "elements":
        return {"elements": [list(c) for c in a.coords()]}
    raise ValueError(f"unknown set serialization form {form!r}")


def set_from_json(spec: GroupSpec, payload: dict) -> GroupSet:
    """Parse a set from either interchange form.

    ``{"elements": [[c1,...,cr], ...]}`` lists coordinate tuples;
    ``{"bitmask_hex": "..."}`` is the little-endian membership bitmask
    (bit i of byte i//8 <=> element index i), exactly ceil(order/8) bytes.
    """
    if not isinstance(payload, dict):
        raise ValueError(f"set payload must be an object, got {type(payload).__name__}")
    has_elems = "elements" in payload
    has_mask = "bitmask_hex" in payload
    if has_elems == has_mask:
        raise ValueError("set payload needs exactly one of 'elements' or 'bitmask_hex'")
    if has_elems:
        elems = payload["elements"]
        if not isinstance(elems, list):
            raise ValueError("'elements' must be a list of coordinate tuples")
        bits = 0
        for c in elems:
            try:
                bits |= 1 << encode(spec, c)
            except (TypeError, ValueError) as exc:
                raise ValueError(f"bad element {c!r} for {spec}: {exc}") from exc
        return GroupSet(spec, bits)
    raw = payload["bitmask_hex"]
    if not isinstance(raw, str):
        raise ValueError("'bitmask_hex' must be a hex string")
    try:
        data = bytes.fromhex(raw)
    except ValueError as exc:
        raise ValueError(f"bad bitmask hex: {exc}") from exc
    nbytes = _kernel(spec).nbytes
    if len(data) != nbytes:
        raise ValueError(
            f"bitmask length mismatch: got {len(data)} bytes, expected {nbytes} for {spec}"
        )
    bits = int.from_bytes(data, "little")
    if bits >> spec.order:
        raise ValueError(f"bitmask has bits set beyond the group order {spec.order}")
    return GroupSet(spec, bits)
