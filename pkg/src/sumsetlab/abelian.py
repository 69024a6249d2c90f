"""Numerical verification of sumset covering statements over Abelian groups.

Everything here measures honest cardinalities with the dense-set engine and
compares them against closed-form bounds: the Plunnecke-Ruzsa growth
inequality, the two-half covering argument (each half grows until it
exceeds |G|/2, then one pigeonhole sum finishes), explicit upper bounds for
the bases-union constant, and exact tiny-case searches for that constant.

Real-valued bounds are compared with a relative guard of 1e-9 in the
inequality's favor so float rounding can never report a false violation;
left-hand sides are always exact integers.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .constructions import enumerate_bases, random_basis_matrix, random_cover_set, random_set
from .groups import GroupSpec, decode, is_prime, vector_space_spec
from .reports import map_trials
from .setops import (
    ElementMultiset,
    GroupSet,
    _same_spec,
    is_cover,
    m_fold,
    subset_sums,
    sumset,
)

REL_GUARD = 1e-9


def _at_least(lhs: float, bound: float) -> bool:
    return lhs >= bound * (1.0 - REL_GUARD)


def _at_most(lhs: float, bound: float) -> bool:
    return lhs <= bound * (1.0 + REL_GUARD)


def _least_integer_at_least(value: float) -> int:
    nearest = round(value)
    if abs(value - nearest) <= REL_GUARD:
        return int(nearest)
    return math.ceil(value)


# ---------------------------------------------------------------------------
# Plunnecke-Ruzsa


@dataclass
class PlunneckeReport:
    """One instance of |A+B| <= alpha*|B|  =>  |kA| <= alpha^k * |B|."""

    group: str
    k: int
    card_a: int
    card_b: int
    card_sum: int
    alpha: float
    lhs: int
    rhs: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "group": self.group,
            "k": self.k,
            "card_a": self.card_a,
            "card_b": self.card_b,
            "card_sum": self.card_sum,
            "alpha": self.alpha,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "passed": self.passed,
        }


def check_plunnecke(a: GroupSet, b: GroupSet, k: int) -> PlunneckeReport:
    """Measure alpha = |A+B|/|B| and verify |kA| <= alpha^k |B|.

    A failure would indicate an engine bug, not new mathematics.
    """
    _same_spec(a.spec, b.spec)
    if a.card == 0 or b.card == 0:
        raise ValueError("both sets must be nonempty (alpha is undefined for empty B)")
    k = int(k)
    if k < 2:
        raise ValueError(f"fold count must be > 1, got {k}")
    s = sumset(a, b)
    alpha = s.card / b.card
    lhs = m_fold(a, k).card
    rhs = alpha**k * b.card
    return PlunneckeReport(
        group=str(a.spec),
        k=k,
        card_a=a.card,
        card_b=b.card,
        card_sum=s.card,
        alpha=alpha,
        lhs=lhs,
        rhs=rhs,
        passed=_at_most(lhs, rhs),
    )


def plunnecke_trials(
    spec: GroupSpec,
    trials: int,
    seed: int,
    k_choices: Sequence[int] = (2, 3, 4),
    workers: int = 1,
) -> list[PlunneckeReport]:
    """Seeded random nonempty (A, B, k) instances; per-trial seed is seed+i."""

    def one(i: int) -> PlunneckeReport:
        rng = random.Random(seed + i)
        n = spec.order
        a = random_set(spec, rng.randint(1, n), rng)
        b = random_set(spec, rng.randint(1, n), rng)
        return check_plunnecke(a, b, rng.choice(list(k_choices)))

    return map_trials(one, trials, workers)


# ---------------------------------------------------------------------------
# Two-half covering bound


def theorem1_bound_raw(m: int, order: int) -> float:
    """The raw real bound on K: log2(log2 N) for m = 2, else m*ln(log2 N)."""
    m = int(m)
    if m < 2:
        raise ValueError(f"bound is defined for m >= 2, got {m}")
    if order < 4:
        raise ValueError(f"group order must be >= 4, got {order}")
    loglike = math.log2(order)
    if m == 2:
        return math.log2(loglike)
    return m * math.log(loglike)


def theorem1_bound(m: int, order: int) -> int:
    """Smallest integer K satisfying the half-growth bound (>= counts)."""
    return max(1, _least_integer_at_least(theorem1_bound_raw(m, order)))


@dataclass
class Theorem1Report:
    """End-to-end check that 2K sets with m-fold sumset G sum to G."""

    group: str
    m: int
    K: int
    lam: float
    required_K: int | None
    meets_required_K: bool | None
    family_cards: list[int]
    hypothesis_ok: list[bool]
    halves: list[dict]
    chain_ok: bool
    halves_exceed_half: list[bool]
    final_card: int
    final_cover: bool
    passed: bool

    def to_dict(self) -> dict:
        return {
            "group": self.group,
            "m": self.m,
            "K": self.K,
            "lambda": self.lam,
            "required_K": self.required_K,
            "meets_required_K": self.meets_required_K,
            "family_cards": self.family_cards,
            "hypothesis_ok": self.hypothesis_ok,
            "halves": self.halves,
            "chain_ok": self.chain_ok,
            "halves_exceed_half": self.halves_exceed_half,
            "final_card": self.final_card,
            "final_cover": self.final_cover,
            "passed": self.passed,
        }


def verify_theorem1(family: Sequence[GroupSet], m: int) -> Theorem1Report:
    """Check the full covering chain for a family of 2K sets.

    Per set: the hypothesis ``m_fold(A_i, m) = G``.  Per half of the family:
    the running prefix sums with, at every hypothesis-satisfying step, the
    growth inequality ``|G|^(1/m) * |P|^((m-1)/m) <= |P + A_i|``, ending
    with the half exceeding |G|/2.  Finally the two halves are summed and
    compared against G.  The report passes only when every hypothesis and
    the final coverage hold.
    """
    family = list(family)
    if not family:
        raise ValueError("family must be nonempty")
    if len(family) % 2:
        raise ValueError(f"family length must be even (2K sets), got {len(family)}")
    m = int(m)
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    spec = family[0].spec
    for a in family:
        _same_spec(spec, a.spec)
        if a.card == 0:
            raise ValueError("family sets must be nonempty")
    big_k = len(family) // 2
    n = spec.order

    hypothesis_ok = [is_cover(m_fold(a, m)) for a in family]
    halves: list[dict] = []
    half_sets: list[GroupSet] = []
    for h in (0, 1):
        part = family[h * big_k : (h + 1) * big_k]
        prefix = part[0]
        cards = [prefix.card]
        steps: list[dict] = []
        for i in range(1, big_k):
            bound = n ** (1.0 / m) * prefix.card ** ((m - 1.0) / m)
            prefix = sumset(prefix, part[i])
            steps.append(
                {
                    "index": h * big_k + i,
                    "bound": bound,
                    "card": prefix.card,
                    "claimed": hypothesis_ok[h * big_k + i],
                    "holds": _at_least(prefix.card, bound),
                }
            )
            cards.append(prefix.card)
        halves.append(
            {
                "prefix_cards": cards,
                "steps": steps,
                "final_card": prefix.card,
                "exceeds_half": 2 * prefix.card > n,
            }
        )
        half_sets.append(prefix)
    total = sumset(half_sets[0], half_sets[1])

    try:
        required = theorem1_bound(m, n)
    except ValueError:
        required = None
    return Theorem1Report(
        group=str(spec),
        m=m,
        K=big_k,
        lam=((m - 1) / m) ** big_k,
        required_K=required,
        meets_required_K=None if required is None else big_k >= required,
        family_cards=[a.card for a in family],
        hypothesis_ok=hypothesis_ok,
        halves=halves,
        chain_ok=all(s["holds"] for half in halves for s in half["steps"] if s["claimed"]),
        halves_exceed_half=[half["exceeds_half"] for half in halves],
        final_card=total.card,
        final_cover=is_cover(total),
        passed=all(hypothesis_ok) and is_cover(total),
    )


def theorem1_trials(
    spec: GroupSpec,
    m: int,
    trials: int,
    seed: int,
    K: int | None = None,
    density: float = 0.5,
    workers: int = 1,
) -> list[Theorem1Report]:
    """Run verify_theorem1 on families of 2K rejection-sampled cover sets."""
    big_k = theorem1_bound(m, spec.order) if K is None else int(K)
    if big_k < 1:
        raise ValueError(f"K must be >= 1, got {big_k}")

    def one(i: int) -> Theorem1Report:
        rng = random.Random(seed + i)
        sets = [
            random_cover_set(spec, m, density, seed=rng.getrandbits(62))
            for _ in range(2 * big_k)
        ]
        return verify_theorem1(sets, m)

    return map_trials(one, trials, workers)


# ---------------------------------------------------------------------------
# Pigeonhole completion


@dataclass
class PigeonholeReport:
    """A + B = G whenever |A|, |B| > |G|/2; no claim otherwise."""

    group: str
    order: int
    card_a: int
    card_b: int
    premise_met: bool
    sum_card: int
    sum_covers: bool
    witness_missing: list[int] | None
    passed: bool

    def to_dict(self) -> dict:
        return {
            "group": self.group,
            "order": self.order,
            "card_a": self.card_a,
            "card_b": self.card_b,
            "premise_met": self.premise_met,
            "sum_card": self.sum_card,
            "sum_covers": self.sum_covers,
            "witness_missing": self.witness_missing,
            "passed": self.passed,
        }


def pigeonhole_sum(a: GroupSet, b: GroupSet) -> PigeonholeReport:
    _same_spec(a.spec, b.spec)
    n = a.spec.order
    s = sumset(a, b)
    premise = 2 * a.card > n and 2 * b.card > n
    covers = is_cover(s)
    witness = None
    if premise and not covers:
        comp = ((1 << n) - 1) & ~s.bits
        witness = list(decode(a.spec, (comp & -comp).bit_length() - 1))
    return PigeonholeReport(
        group=str(a.spec),
        order=n,
        card_a=a.card,
        card_b=b.card,
        premise_met=premise,
        sum_card=s.card,
        sum_covers=covers,
        witness_missing=witness,
        passed=covers if premise else True,
    )


def pigeonhole_exhaustive(order: int) -> dict:
    """Word-parallel exhaustive check over Z_order: every unordered pair of
    subsets with cardinality > order/2 sums to the whole group.

    Subsets are machine-word bitmasks; A + B accumulates cyclic rotations
    of the whole candidate block at once.  Returns counts and failures
    (expected none).
    """
    n = int(order)
    if not 1 <= n <= 24:
        raise ValueError(f"exhaustive sweep supports orders 1..24, got {n}")
    all_masks = np.arange(1 << n, dtype=np.uint64)
    pop = np.zeros(1 << n, dtype=np.uint32)
    for j in range(n):
        pop += ((all_masks >> np.uint64(j)) & np.uint64(1)).astype(np.uint32)
    sets = all_masks[2 * pop > n]
    full = np.uint64((1 << n) - 1)
    pairs = 0
    failures: list[dict] = []
    for ai in range(len(sets)):
        a = int(sets[ai])
        block = sets[ai:]  # unordered pairs; sumset is commutative
        acc = np.zeros(len(block), dtype=np.uint64)
        g = 0
        bits = a
        while bits:
            if bits & 1:
                if g == 0:
                    acc |= block
                else:
                    acc |= ((block << np.uint64(g)) | (block >> np.uint64(n - g))) & full
                if acc.min() == full:
                    break
            bits >>= 1
            g += 1
        if acc.min() != full:
            for bi in np.flatnonzero(acc != full):
                failures.append({"order": n, "a_mask": a, "b_mask": int(block[bi])})
        pairs += len(block)
    return {
        "order": n,
        "n_sets": int(len(sets)),
        "pairs_checked": pairs,
        "failures": failures,
        "passed": not failures,
    }


# ---------------------------------------------------------------------------
# Bases-union constant: explicit upper bounds and tiny exact values


@dataclass
class KpnUpper:
    """Closed-form upper bounds for the bases-union covering constant."""

    p: int
    n: int
    general: float
    for_p3: float | None

    def to_dict(self) -> dict:
        return {"p": self.p, "n": self.n, "general": self.general, "for_p3": self.for_p3}


def kpn_upper(p: int, n: int) -> KpnUpper:
    """Evaluate ``2(p-1) ln n + 2(p-1) ln log2 p`` and, for p = 3, the
    sharper ``2 log2 n + 2``."""
    p, n = int(p), int(n)
    if not is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    general = 2 * (p - 1) * math.log(n) + 2 * (p - 1) * math.log(math.log2(p))
    for_p3 = 2 * math.log2(n) + 2 if p == 3 else None
    return KpnUpper(p=p, n=n, general=general, for_p3=for_p3)


def is_additive_basis(b: ElementMultiset) -> bool:
    """True iff the subset-sum closure of B covers the group."""
    return is_cover(subset_sums(b))


@dataclass
class KpnSearchReport:
    """Search for the least k such that every union of k bases is additive."""

    p: int
    n: int
    k_max: int
    budget: int
    levels: list[dict]
    result_k: int | None
    exact: bool

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "k_max": self.k_max,
            "budget": self.budget,
            "levels": self.levels,
            "result_k": self.result_k,
            "exact": self.exact,
        }


_CLOSURE_WITNESS_LIMIT = 64


def _union_multiset(p: int, n: int, bases: Sequence[Sequence[Sequence[int]]]) -> ElementMultiset:
    spec = vector_space_spec(p, n)
    rows = [row for basis in bases for row in basis]
    return ElementMultiset.from_coords(spec, rows)


def _counterexample_record(p: int, n: int, bases) -> dict:
    union = _union_multiset(p, n, bases)
    closure = subset_sums(union)
    rec = {
        "bases": [[list(row) for row in basis] for basis in bases],
        "closure_card": closure.card,
    }
    if closure.card <= _CLOSURE_WITNESS_LIMIT:
        rec["closure"] = [list(c) for c in closure.coords()]
    return rec


def kpn_exact_small(
    p: int,
    n: int,
    k_max: int = 4,
    budget: int = 10_000,
    seed: int = 0,
) -> KpnSearchReport:
    """For k = 1..k_max, hunt for a union of k bases that is NOT an additive
    basis; report the least k with no counterexample.

    Exhaustive when all unordered k-tuples of bases fit the budget (the
    result is then exact); otherwise seeded random tuples are tried and the
    result is only empirical.
    """
    p, n = int(p), int(n)
    if not is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    bases = enumerate_bases(p, n)
    levels: list[dict] = []
    result_k: int | None = None
    exact = False
    for k in range(1, int(k_max) + 1):
        exhaustive = bases is not None and math.comb(len(bases) + k - 1, k) <= budget
        counter = None
        checked = 0
        if exhaustive:
            import itertools

            for tup in itertools.combinations_with_replacement(bases, k):
                checked += 1
                if not is_additive_basis(_union_multiset(p, n, tup)):
                    counter = _counterexample_record(p, n, tup)
                    break
        else:
            rng = random.Random(seed * 1_000_003 + k)
            for _ in range(budget):
                checked += 1
                tup = tuple(
                    random_basis_matrix(p, n, seed=rng.getrandbits(62)).rows
                    for _ in range(k)
                )
                if not is_additive_basis(_union_multiset(p, n, tup)):
                    counter = _counterexample_record(p, n, tup)
                    break
        levels.append(
            {
                "k": k,
                "mode": "exhaustive" if exhaustive else "sampled",
                "tuples_checked": checked,
                "counterexample": counter,
            }
        )
        if counter is None:
            result_k = k
            exact = exhaustive
            break
    return KpnSearchReport(
        p=p,
        n=n,
        k_max=int(k_max),
        budget=int(budget),
        levels=levels,
        result_k=result_k,
        exact=exact,
    )
