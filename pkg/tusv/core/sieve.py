"""
Value masks, sumsets and witness search.

A ValueMask marks attained values on [floor, bound]. Over the naturals
floor is 0; integer-domain terms may attain negative values, and a mask
then starts at the least one so that sumsets stay exact before the final
restriction to [0, N].
"""

import logging
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

import numpy as np

from tusv.core.errors import BoundTooLarge
from tusv.core.generators import (
    Domain,
    Generator,
    TernaryForm,
    branches,
    generator_values,
    min_value,
)

logger = logging.getLogger(__name__)

MAX_BOUND = 2**32

# Outer-add two supports when the pair count stays below this many per mask slot.
OUTER_ADD_FACTOR = 4

WITNESS_CHUNK = 1 << 20


@dataclass(frozen=True)
class ValueMask:
    """Attained values on [floor, bound]; bits[i] covers the value floor + i."""

    bound: int
    bits: np.ndarray
    floor: int = 0

    def __post_init__(self) -> None:
        if self.bits.dtype != np.bool_:
            raise ValueError(f"mask bits must be boolean, got {self.bits.dtype}")
        if len(self.bits) != self.bound - self.floor + 1:
            raise ValueError(
                f"mask over [{self.floor}, {self.bound}] needs "
                f"{self.bound - self.floor + 1} bits, got {len(self.bits)}"
            )
        self.bits.setflags(write=False)

    def __contains__(self, n: int) -> bool:
        return self.floor <= n <= self.bound and bool(self.bits[n - self.floor])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ValueMask):
            return NotImplemented
        return (
            self.bound == other.bound
            and self.floor == other.floor
            and np.array_equal(self.bits, other.bits)
        )

    def __hash__(self) -> int:
        return hash((self.bound, self.floor, self.bits.tobytes()))

    @classmethod
    def from_values(cls, values: np.ndarray, bound: int, floor: int = 0) -> "ValueMask":
        bits = np.zeros(bound - floor + 1, dtype=np.bool_)
        values = np.asarray(values, dtype=np.int64)
        values = values[(values >= floor) & (values <= bound)]
        bits[values - floor] = True
        return cls(bound, bits, floor)

    @property
    def count(self) -> int:
        return int(np.count_nonzero(self.bits))

    def values(self) -> np.ndarray:
        """Attained values, ascending."""
        return np.flatnonzero(self.bits).astype(np.int64) + self.floor

    def restrict(self, bound: int, floor: int = 0) -> "ValueMask":
        """Window [floor, bound] of this mask; both ends must lie inside it."""
        if floor < self.floor or bound > self.bound or bound < floor:
            raise ValueError(
                f"[{floor}, {bound}] is not inside [{self.floor}, {self.bound}]"
            )
        start = floor - self.floor
        return ValueMask(bound, self.bits[start : start + bound - floor + 1].copy(), floor)

    def missing(self) -> np.ndarray:
        """Non-attained values on [max(floor, 0), bound], ascending."""
        start = max(0, -self.floor)
        return np.flatnonzero(~self.bits[start:]).astype(np.int64) + self.floor + start

    def missing_count(self) -> int:
        start = max(0, -self.floor)
        return len(self.bits) - start - int(np.count_nonzero(self.bits[start:]))


@dataclass(frozen=True)
class WitnessReport:
    """Non-attained values of a form on [0, bound]."""

    form: TernaryForm
    bound: int
    witnesses: tuple[int, ...]
    exhaustive: bool = True


@dataclass(frozen=True)
class NonrepCertificate:
    """
    Outcome of an exhaustive search for one value.

    ranges holds, per term, the (least, greatest) variable value enumerated;
    representation is the attaining (x, y, z) when one exists.
    """

    form: TernaryForm
    value: int
    ranges: tuple[tuple[int, int], ...]
    representation: Optional[tuple[int, int, int]] = None

    @property
    def nonrepresentable(self) -> bool:
        return self.representation is None

    def __bool__(self) -> bool:
        return self.nonrepresentable


def check_bound(bound: int, limit: int = MAX_BOUND) -> None:
    if bound < 0:
        raise ValueError(f"bound must be >= 0, got {bound}")
    if bound > limit:
        raise BoundTooLarge(bound, limit)


def generator_mask(g: Generator, bound: int, z_min: int = 0) -> ValueMask:
    """
    Mask of the values of g up to bound.

    The mask starts at min(0, least value of g), so integer-domain terms
    keep their negative values.
    """
    if bound < 0:
        raise ValueError(f"bound must be >= 0, got {bound}")
    floor = min(0, min_value(g))
    return ValueMask.from_values(generator_values(g, bound, z_min), bound, floor)


def sumset_mask(a: ValueMask, b: ValueMask, bound: int) -> ValueMask:
    """
    Mask of {u + v : u in a, v in b} on [a.floor + b.floor, bound].

    Sparse pairs are outer-added; otherwise the denser mask is shifted by each
    element of the sparser one and OR-ed in.
    """
    floor = a.floor + b.floor
    if a.bound < bound - b.floor or b.bound < bound - a.floor:
        raise ValueError(
            f"sumset up to {bound} needs masks reaching {bound - b.floor} and "
            f"{bound - a.floor}, got {a.bound} and {b.bound}"
        )
    size = bound - floor + 1
    if size <= 0:
        return ValueMask(bound, np.zeros(0, dtype=np.bool_), bound + 1)
    sparse, dense = (a, b) if a.count <= b.count else (b, a)
    out = np.zeros(size, dtype=np.bool_)
    if sparse.count * dense.count <= OUTER_ADD_FACTOR * size:
        sums = np.add.outer(sparse.values(), dense.values()).ravel()
        sums = sums[sums <= bound]
        out[sums - floor] = True
        return ValueMask(bound, out, floor)
    for offset in np.flatnonzero(sparse.bits):
        width = size - offset
        if width <= 0:
            break
        out[offset:] |= dense.bits[:width]
    return ValueMask(bound, out, floor)


def _combine(masks: Sequence[ValueMask], bound: int) -> ValueMask:
    """Sumset of three masks, sparsest pair first, restricted to [0, bound]."""
    first, second, third = sorted(masks, key=lambda m: m.count)
    pair = sumset_mask(first, second, bound - third.floor)
    total = sumset_mask(pair, third, bound)
    return total.restrict(bound, 0)


def form_mask(f: TernaryForm, bound: int, limit: int = MAX_BOUND) -> ValueMask:
    """
    Mask of the values of f on [0, bound].

    Raises:
        BoundTooLarge: if bound exceeds the configured limit
    """
    check_bound(bound, limit)
    floors = [min(0, min_value(g)) for g in f.terms]
    total_floor = sum(floors)
    masks = [
        generator_mask(g, bound - (total_floor - fl))
        for g, fl in zip(f.terms, floors)
    ]
    return _combine(masks, bound)


def constrained_form_mask(
    f: TernaryForm, bound: int, variables: Sequence[int], k: int
) -> ValueMask:
    """
    Mask of values of f on [0, bound] attained with at least one of the given
    term indices having variable >= k.
    """
    check_bound(bound)
    if any(g.domain == Domain.INTEGERS for g in f.terms):
        raise ValueError("constrained masks are defined over the naturals only")
    full = [generator_mask(g, bound) for g in f.terms]
    out = np.zeros(bound + 1, dtype=np.bool_)
    for index in variables:
        masks = list(full)
        masks[index] = generator_mask(f.terms[index], bound, z_min=k)
        out |= _combine(masks, bound).bits
    return ValueMask(bound, out)


def non_representables(f: TernaryForm, bound: int, limit: int = MAX_BOUND) -> WitnessReport:
    """All n in [0, bound] the form misses."""
    mask = form_mask(f, bound, limit)
    return WitnessReport(f, bound, tuple(int(n) for n in mask.missing()))


def first_witness(f: TernaryForm, bound: int, limit: int = MAX_BOUND) -> Optional[int]:
    """Least n <= bound the form misses, or None."""
    mask = form_mask(f, bound, limit)
    if mask.bits.all():
        return None
    return int(np.argmin(mask.bits))


def is_universal_up_to(f: TernaryForm, bound: int, limit: int = MAX_BOUND) -> bool:
    """Bounded proxy for universality: every n <= bound is attained."""
    return first_witness(f, bound, limit) is None


def iter_witnesses(mask: ValueMask, chunk: int = WITNESS_CHUNK) -> Iterator[np.ndarray]:
    """Stream the non-attained values of a mask in ascending chunks."""
    start = max(0, -mask.floor)
    while start < len(mask.bits):
        block = mask.bits[start : start + chunk]
        missing = np.flatnonzero(~block)
        if len(missing):
            yield missing.astype(np.int64) + mask.floor + start
        start += chunk


def term_table(g: Generator, upper: int, z_min: int = 0) -> tuple[dict[int, int], tuple[int, int]]:
    """
    Map each value <= upper of g to the variable attaining it (least |z|).

    Returns:
        Tuple of (value -> z, (least z, greatest z) enumerated)
    """
    table: dict[int, int] = {}
    lo = hi = 0
    for branch in branches(g):
        if branch.c == 0:
            table.setdefault(0, 0)
            continue
        limit = branch.z_limit(upper)
        for z in range(z_min, limit):
            v = branch.value(z)
            signed = branch.sign * z
            if v <= upper and (v not in table or abs(signed) < abs(table[v])):
                table[v] = signed
            lo, hi = min(lo, signed), max(hi, signed)
    return table, (lo, hi)


def find_representation(
    f: TernaryForm, n: int, tables: Optional[list[dict[int, int]]] = None
) -> Optional[tuple[int, int, int]]:
    """An (x, y, z) attaining n, or None."""
    if tables is None:
        floors = [min(0, min_value(g)) for g in f.terms]
        total = sum(floors)
        tables = [term_table(g, n - (total - fl))[0] for g, fl in zip(f.terms, floors)]
    first, second, third = tables
    for u, x in sorted(first.items()):
        for v, y in sorted(second.items()):
            w = n - u - v
            if w in third:
                return x, y, third[w]
    return None


def check_nonrep(f: TernaryForm, n: int) -> NonrepCertificate:
    """
    Exhaustively decide whether n is attained by f.

    Every term is enumerated while its value stays <= n minus the least
    values of the other two terms.
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    floors = [min(0, min_value(g)) for g in f.terms]
    total = sum(floors)
    tables, ranges = [], []
    for g, fl in zip(f.terms, floors):
        table, span = term_table(g, n - (total - fl))
        tables.append(table)
        ranges.append(span)
    triple = find_representation(f, n, tables)
    return NonrepCertificate(f, n, tuple(ranges), triple)
