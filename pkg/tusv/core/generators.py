"""
Polynomial summands and their value sets.

Every summand kind is a quadratic in its variable. Over the naturals each one
is a single branch

    value(z) = C * z(z-1)/2 + D * z,   z >= 0

with the coefficient already folded into (C, D). Over the integers a second
branch covers z <= 0, obtained by substituting -z:

    value(-z) = C * z(z-1)/2 + (C - D) * z

Both branches are convex in z, so values up to a bound are found by scanning
z from 0 up to the first index past which the branch stays above the bound.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from math import gcd
from typing import Iterator, Optional

import numpy as np

logger = logging.getLogger(__name__)

# Guard for vectorised int64 evaluation (intermediates stay below this).
INT64_SAFE_LIMIT = 2**62

VARIABLES = ("x", "y", "z")


class Domain(str, Enum):
    """Range of a summand's variable."""

    NATURALS = "N"
    INTEGERS = "Z"


class Kind(str, Enum):
    """Summand families."""

    ZERO = "zero"
    SQUARE = "sq"
    TRIANGULAR = "tri"
    POLYGONAL = "p"
    SECOND_POLYGONAL = "pbar"
    GENPOLY = "gp"


@dataclass(frozen=True)
class GeneratorKind:
    """A summand family together with its parameters (m, or c and d)."""

    kind: Kind
    m: Optional[int] = None
    c: Optional[int] = None
    d: Optional[int] = None

    def __post_init__(self) -> None:
        if self.kind in (Kind.POLYGONAL, Kind.SECOND_POLYGONAL):
            if self.m is None or self.m < 3:
                raise ValueError(f"{self.kind.value} requires m >= 3, got {self.m}")
        if self.kind == Kind.GENPOLY:
            if self.c is None or self.d is None or self.c < 1 or self.d < 1:
                raise ValueError(f"gp requires c >= 1 and d >= 1, got ({self.c}, {self.d})")

    @classmethod
    def zero(cls) -> "GeneratorKind":
        return cls(Kind.ZERO)

    @classmethod
    def square(cls) -> "GeneratorKind":
        return cls(Kind.SQUARE)

    @classmethod
    def triangular(cls) -> "GeneratorKind":
        return cls(Kind.TRIANGULAR)

    @classmethod
    def polygonal(cls, m: int) -> "GeneratorKind":
        return cls(Kind.POLYGONAL, m=m)

    @classmethod
    def second_polygonal(cls, m: int) -> "GeneratorKind":
        return cls(Kind.SECOND_POLYGONAL, m=m)

    @classmethod
    def genpoly(cls, c: int, d: int) -> "GeneratorKind":
        return cls(Kind.GENPOLY, c=c, d=d)

    @property
    def strict(self) -> bool:
        """True for gp(c, d) with d not dividing c."""
        return self.kind == Kind.GENPOLY and self.c % self.d != 0


@dataclass(frozen=True)
class Generator:
    """One summand: coeff * kind(variable), variable ranging over a domain."""

    kind: GeneratorKind
    coeff: int = 1
    domain: Domain = Domain.NATURALS

    def __post_init__(self) -> None:
        if self.coeff < 1:
            raise ValueError(f"coefficient must be >= 1, got {self.coeff}")


@dataclass(frozen=True)
class TernaryForm:
    """An ordered triple of summands f1(x) + f2(y) + f3(z)."""

    terms: tuple[Generator, Generator, Generator]

    def __post_init__(self) -> None:
        if len(self.terms) != 3:
            raise ValueError(f"a ternary form needs exactly 3 terms, got {len(self.terms)}")

    @classmethod
    def of(cls, first: Generator, second: Generator, third: Optional[Generator] = None):
        """Build a form; a missing third term becomes the zero sentinel."""
        return cls((first, second, third or Generator(GeneratorKind.zero())))

    @property
    def is_integral(self) -> bool:
        return any(g.domain == Domain.INTEGERS for g in self.terms)


@dataclass(frozen=True)
class Branch:
    """value(z) = c * z(z-1)/2 + d * z for z >= 0, with c >= 1 (or c = d = 0)."""

    c: int
    d: int
    sign: int = 1

    def value(self, z: int) -> int:
        return self.c * z * (z - 1) // 2 + self.d * z

    def minimum(self) -> int:
        """Least value over z >= 0."""
        if self.c == 0:
            return 0
        # Real vertex sits at (c - 2d) / 2c.
        vertex = (self.c - 2 * self.d) // (2 * self.c)
        candidates = {max(0, vertex), max(0, vertex + 1)}
        return min(self.value(z) for z in candidates)

    def z_limit(self, upper: int) -> int:
        """Smallest Z such that value(z) > upper for every z >= Z."""
        if self.c == 0:
            raise ValueError("the zero branch has no index limit")
        # Increments c*z + d are nonnegative from here on.
        start = max(0, -(self.d // self.c))
        if self.value(start) > upper:
            return start
        lo, hi = start, start + 1
        while self.value(hi) <= upper:
            lo, hi = hi, 2 * hi
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self.value(mid) <= upper:
                lo = mid
            else:
                hi = mid
        return hi

    def values(self, upper: int, z_min: int = 0) -> np.ndarray:
        """All values <= upper for z >= z_min (unsorted, may repeat)."""
        if self.c == 0:
            return np.zeros(1, dtype=np.int64)
        limit = self.z_limit(upper)
        if limit <= z_min:
            return np.zeros(0, dtype=np.int64)
        if self.c * limit * limit + abs(self.d) * limit >= INT64_SAFE_LIMIT:
            raise OverflowError(f"branch ({self.c}, {self.d}) overflows int64 at z={limit}")
        zs = np.arange(z_min, limit, dtype=np.int64)
        vals = self.c * (zs * (zs - 1) // 2) + self.d * zs
        return vals[vals <= upper]


def _base_pair(kind: GeneratorKind) -> tuple[int, int]:
    if kind.kind == Kind.SQUARE:
        return 2, 1
    if kind.kind == Kind.TRIANGULAR:
        return 1, 1
    if kind.kind == Kind.POLYGONAL:
        return kind.m - 2, 1
    if kind.kind == Kind.SECOND_POLYGONAL:
        if kind.m == 3:
            # T_{-z} = T_{z-1}: same value set as T_z
            return 1, 1
        return kind.m - 2, kind.m - 3
    if kind.kind == Kind.GENPOLY:
        return kind.c, kind.d
    return 0, 0


def branches(g: Generator) -> tuple[Branch, ...]:
    """Branches whose union of values over z >= 0 is the value set of g."""
    if g.kind.kind == Kind.ZERO:
        return (Branch(0, 0),)
    c, d = _base_pair(g.kind)
    primary = Branch(g.coeff * c, g.coeff * d)
    if g.domain == Domain.NATURALS:
        return (primary,)
    mirror = Branch(primary.c, primary.c - primary.d, sign=-1)
    return (primary, mirror)


def evaluate(g: Generator, z: int) -> int:
    """
    Exact value of a summand at z.

    Args:
        g: The summand
        z: Variable value; must be >= 0 over the naturals

    Returns:
        coeff * kernel(z), computed with Python integers
    """
    if g.domain == Domain.NATURALS and z < 0:
        raise ValueError(f"z must be >= 0 over the naturals, got {z}")
    kind = g.kind
    if kind.kind == Kind.ZERO:
        kernel = 0
    elif kind.kind == Kind.SQUARE:
        kernel = z * z
    elif kind.kind == Kind.TRIANGULAR:
        kernel = z * (z + 1) // 2
    elif kind.kind == Kind.POLYGONAL:
        kernel = (kind.m - 2) * z * (z - 1) // 2 + z
    elif kind.kind == Kind.SECOND_POLYGONAL:
        kernel = (kind.m - 2) * z * (z + 1) // 2 - z
    else:
        kernel = kind.c * z * (z - 1) // 2 + kind.d * z
    return g.coeff * kernel


def to_genpoly(kind: GeneratorKind) -> Optional[tuple[int, int]]:
    """
    Express a kind as (c, d) with kind(z) = c*C(z,2) + d*z for z >= 0.

    Returns None for pbar_3 (d would be 0) and for the zero sentinel.
    """
    if kind.kind == Kind.ZERO:
        return None
    if kind.kind == Kind.SECOND_POLYGONAL and kind.m == 3:
        return None
    return _base_pair(kind)


def integer_domain_split(g: Generator) -> tuple[Branch, Branch]:
    """
    Split a gp summand over the integers into its two natural-index branches.

    The first branch is gp(c, d) itself, the second is z -> c*C(z,2) + (c-d)*z,
    the value at -z. The mirror can dip below zero when d > c.

    Both halves come back as Branch, not Generator: the mirror's linear
    coefficient c - d may be zero or negative, which no gp(c, d) summand allows.
    """
    if g.kind.kind != Kind.GENPOLY:
        raise ValueError(f"integer_domain_split needs a gp term, got {g.kind.kind.value}")
    primary, mirror = branches(Generator(g.kind, g.coeff, Domain.INTEGERS))
    return primary, mirror


def min_value(g: Generator) -> int:
    """Least value of g (0 over the naturals, possibly negative over the integers)."""
    return min(b.minimum() for b in branches(g))


def generator_values(g: Generator, upper: int, z_min: int = 0) -> np.ndarray:
    """
    Sorted distinct values of g that are <= upper, negatives included.

    z_min restricts the index (|z| >= z_min over the integers).
    """
    parts = [b.values(upper, z_min) for b in branches(g)]
    return np.unique(np.concatenate(parts))


def value_stream(g: Generator, bound: int) -> Iterator[int]:
    """Ascending distinct values of g in [0, bound]."""
    if bound < 0:
        raise ValueError(f"bound must be >= 0, got {bound}")
    vals = generator_values(g, bound)
    for v in vals[vals >= 0]:
        yield int(v)


def canonical_display(c: int, d: int, var: str = "z") -> str:
    """
    Render c*C(z,2) + d*z as z(cz + (2d - c))/2 with common factors pulled out.

    The factor g = gcd(c, 2d - c) is extracted; an even g absorbs the /2.
    """
    if c < 1 or d < 1:
        raise ValueError(f"canonical_display needs c, d >= 1, got ({c}, {d})")
    e = 2 * d - c
    if e == 0:
        half = c // 2
        return f"{'' if half == 1 else half}{var}^2"
    g = gcd(c, abs(e))
    inner_c, inner_e = c // g, e // g
    lead = f"{'' if inner_c == 1 else inner_c}{var}"
    sign = "+" if inner_e > 0 else "-"
    inner = f"{var}({lead}{sign}{abs(inner_e)})"
    if g % 2 == 0:
        factor = g // 2
        return f"{'' if factor == 1 else factor}{inner}"
    return f"{'' if g == 1 else g}{inner}/2"


def display_generator(g: Generator, var: str = "z") -> str:
    """Paper-style rendering of one summand, e.g. 2T_y or z(z+3)/2."""
    kind = g.kind
    k = "" if g.coeff == 1 else str(g.coeff)
    if kind.kind == Kind.ZERO:
        return "0"
    if kind.kind == Kind.SQUARE:
        return f"{k}{var}^2"
    if kind.kind == Kind.TRIANGULAR:
        return f"{k}T_{var}"
    if kind.kind == Kind.POLYGONAL:
        return f"{k}p_{kind.m}({var})"
    if kind.kind == Kind.SECOND_POLYGONAL:
        return f"{k}pbar_{kind.m}({var})"
    body = canonical_display(kind.c, kind.d, var)
    return body if g.coeff == 1 else f"{g.coeff}*[{body}]"


def display_form(form: TernaryForm) -> str:
    """Paper-style rendering of a whole form, zero sentinels dropped."""
    parts = [
        display_generator(g, var)
        for g, var in zip(form.terms, VARIABLES)
        if g.kind.kind != Kind.ZERO
    ]
    text = "+".join(parts) if parts else "0"
    integral = [var for g, var in zip(form.terms, VARIABLES) if g.domain == Domain.INTEGERS]
    if integral:
        text += f" ({','.join(integral)} in Z)"
    return text
