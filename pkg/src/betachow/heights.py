"""Places of Q, exact local Weil functions, and height decompositions.

The ground field is fixed to Q: places are the Archimedean absolute value
and one p-adic absolute value per prime, normalized so the product formula
holds exactly.  Local heights are stored multiplicatively as positive
rationals (the logarithm is rendering only), with the standard
representative

    value_v(F, P) = max_j |x_j|_v^{deg F} / |F(x)|_v

for a homogeneous integer-coefficient form F and a normalized projective
point P.  With this representative the height machine identity

    prod_v value_v(F, P) = height(P)^{deg F}

is exact, not merely up to a bounded function.

The finite support of a counting function is discovered by factoring F(P)
and the coordinates; a factorization failure aborts loudly rather than
silently dropping a prime.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, log
from typing import Iterable, Mapping, Sequence

from .poly import MultiPoly
from .primes import factor, is_prime, vp


@dataclass(frozen=True)
class Place:
    """The Archimedean place (prime None) or a finite place of Q."""

    prime: int | None = None

    def __post_init__(self):
        if self.prime is not None and not is_prime(self.prime):
            raise ValueError(f"{self.prime} is not prime")

    @property
    def is_finite(self) -> bool:
        return self.prime is not None

    def __str__(self) -> str:
        return "inf" if self.prime is None else str(self.prime)


ARCH = Place(None)

PlaceSet = frozenset[Place]


def make_place_set(primes: Iterable[int] = ()) -> PlaceSet:
    """Finite place set containing the Archimedean place."""
    return frozenset([ARCH, *(Place(p) for p in primes)])


def parse_places(text: str) -> PlaceSet:
    """Parse 'inf', 'inf,2,3', '2,3', or 'none' (Archimedean always in)."""
    primes = []
    for token in text.split(","):
        token = token.strip()
        if token in ("", "inf", "oo", "none"):
            continue
        primes.append(int(token))
    return make_place_set(primes)


def finite_primes(s: PlaceSet) -> tuple[int, ...]:
    return tuple(sorted(v.prime for v in s if v.prime is not None))


def abs_at(x: Fraction | int, v: Place) -> Fraction:
    """|x|_v as an exact rational (x = 0 maps to 0)."""
    x = Fraction(x)
    if x == 0:
        return Fraction(0)
    if v.is_finite:
        return Fraction(v.prime) ** (-vp(x, v.prime))
    return abs(x)


@dataclass(frozen=True)
class ProjPoint:
    """Point of P^n(Q) in normalized coordinates: coprime integers, first
    nonzero coordinate positive."""

    coords: tuple[int, ...]

    def __post_init__(self):
        if not self.coords or all(c == 0 for c in self.coords):
            raise ValueError("projective point needs a nonzero coordinate")
        g = 0
        for c in self.coords:
            g = gcd(g, c)
        if g != 1:
            raise ValueError("coordinates must be coprime")
        first = next(c for c in self.coords if c != 0)
        if first < 0:
            raise ValueError("first nonzero coordinate must be positive")

    @classmethod
    def normalize(cls, coords: Sequence[Fraction | int]) -> "ProjPoint":
        fracs = [Fraction(c) for c in coords]
        if all(c == 0 for c in fracs):
            raise ValueError("projective point needs a nonzero coordinate")
        denom = 1
        for c in fracs:
            denom = denom * c.denominator // gcd(denom, c.denominator)
        ints = [int(c * denom) for c in fracs]
        g = 0
        for c in ints:
            g = gcd(g, c)
        ints = [c // g for c in ints]
        if next(c for c in ints if c != 0) < 0:
            ints = [-c for c in ints]
        return cls(tuple(ints))

    @property
    def dim(self) -> int:
        return len(self.coords) - 1

    def __str__(self) -> str:
        return "[" + ":".join(str(c) for c in self.coords) + "]"


def height(p: ProjPoint) -> int:
    """Multiplicative height: max |x_i| over normalized coordinates."""
    return max(abs(c) for c in p.coords)


def height_log(p: ProjPoint) -> float:
    return log(height(p))


@dataclass(frozen=True)
class LocalHeight:
    """Multiplicative local Weil value at one place (lambda = log value)."""

    place: Place
    value: Fraction

    def __post_init__(self):
        if self.value <= 0:
            raise ValueError("multiplicative local height must be positive")

    @property
    def log_value(self) -> float:
        return log(self.value)


def weil_local(f: MultiPoly, p: ProjPoint, v: Place) -> LocalHeight:
    """Standard local Weil value max_j |x_j|_v^deg / |F(x)|_v, exact."""
    if not f.is_homogeneous() or f.total_degree() < 1:
        raise ValueError("weil_local needs a nonconstant homogeneous form")
    if not f.has_integer_coefficients():
        raise ValueError("weil_local needs integer coefficients")
    val = f.evaluate(p.coords)
    if val == 0:
        raise ValueError("point on support")
    d = f.total_degree()
    coord_max = max(abs_at(c, v) for c in p.coords if c != 0)
    return LocalHeight(v, coord_max ** d / abs_at(val, v))


def weil_subscheme(generators: Sequence[tuple[MultiPoly, int]], p: ProjPoint,
                   v: Place) -> LocalHeight:
    """Local value of the subscheme cut out by several forms: the minimum
    of the component values (each form taken with its own degree)."""
    if not generators:
        raise ValueError("subscheme needs at least one generator")
    values = []
    for f, deg in generators:
        if f.total_degree() != deg:
            raise ValueError("declared degree does not match the form")
        values.append(weil_local(f, p, v).value)
    return LocalHeight(v, min(values))


def support_primes(values: Iterable[Fraction | int]) -> tuple[int, ...]:
    """Ascending primes dividing any numerator or denominator."""
    primes: set[int] = set()
    for x in values:
        x = Fraction(x)
        if x == 0:
            continue
        for part in (x.numerator, x.denominator):
            if abs(part) > 1:
                primes.update(factor(part))
    return tuple(sorted(primes))


@dataclass(frozen=True)
class HeightDecomposition:
    """Multiplicative proximity / counting split of a divisor height."""

    proximity: Fraction          # product over v in S
    counting: Fraction           # product over v outside S
    total: Fraction              # proximity * counting
    support: tuple[int, ...]     # finite primes carrying the counting part

    @property
    def log_rows(self) -> dict[str, float]:
        return {"m": log(self.proximity), "N": log(self.counting),
                "h": log(self.total)}


def proximity_counting(f: MultiPoly, p: ProjPoint, s: PlaceSet) -> HeightDecomposition:
    """Exact decomposition h = m * N of the local Weil values of F at P.

    The counting part runs over the finite support found by factoring F(P)
    and the coordinates; everywhere else the local value is 1.
    """
    if ARCH not in s:
        raise ValueError("the place set must contain the Archimedean place")
    val = f.evaluate(p.coords)
    if val == 0:
        raise ValueError("point on support")
    support = support_primes([val, *[c for c in p.coords if c != 0]])
    m = weil_local(f, p, ARCH).value
    for q in finite_primes(s):
        m *= weil_local(f, p, Place(q)).value
    n_part = Fraction(1)
    s_primes = set(finite_primes(s))
    for q in support:
        if q not in s_primes:
            n_part *= weil_local(f, p, Place(q)).value
    return HeightDecomposition(m, n_part, m * n_part, support)


def product_over_places(x: Fraction | int) -> Fraction:
    """prod_v |x|_v over the support of a nonzero rational (exactly 1)."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("product formula needs a nonzero rational")
    total = abs(x)
    for q in support_primes([x]):
        total *= abs_at(x, Place(q))
    return total


@dataclass(frozen=True)
class MkConstant:
    """Finitely-supported multiplicative slack per place (default 1)."""

    entries: tuple[tuple[Place, Fraction], ...] = ()

    def __post_init__(self):
        for _, g in self.entries:
            if g <= 0:
                raise ValueError("multiplicative slack must be positive")

    @classmethod
    def trivial(cls) -> "MkConstant":
        return cls(())

    @classmethod
    def from_map(cls, m: Mapping[Place, Fraction]) -> "MkConstant":
        return cls(tuple(sorted(((v, Fraction(g)) for v, g in m.items()),
                                key=lambda t: (t[0].prime is not None, t[0].prime or 0))))

    def at(self, v: Place) -> Fraction:
        for place, g in self.entries:
            if place == v:
                return g
        return Fraction(1)

    def support(self) -> tuple[Place, ...]:
        return tuple(v for v, g in self.entries if g != 1)


def theoremkey_condition(p: ProjPoint, forms: Sequence[MultiPoly],
                         s: PlaceSet, gamma: MkConstant | None = None,
                         mode: str = "i") -> bool:
    """Exact per-place comparison of normalized local heights off S.

    forms[0] is the reference divisor D_0; the rest are D_1..D_r.  Mode "i"
    checks (1/d_i) lambda_i <= (1/d_0) lambda_0 + gamma_v at every finite
    place outside S for every i; mode "ii" checks the sum over i instead.
    Comparisons are cross-powered so only integer exponents appear.
    """
    if mode not in ("i", "ii"):
        raise ValueError("mode must be 'i' or 'ii'")
    if len(forms) < 2:
        raise ValueError("need the reference form and at least one divisor")
    gamma = gamma or MkConstant.trivial()
    degrees = []
    for f in forms:
        if not f.is_homogeneous() or f.total_degree() < 1:
            raise ValueError("degenerate degrees: forms must be homogeneous of degree >= 1")
        degrees.append(f.total_degree())
    d0 = degrees[0]
    if mode == "i" and any(d < d0 for d in degrees[1:]):
        raise ValueError("mode i needs deg(D_i) >= deg(D_0)")
    values = [f.evaluate(p.coords) for f in forms]
    if any(val == 0 for val in values):
        raise ValueError("point on support")

    primes = set(support_primes(values + [c for c in p.coords if c != 0]))
    primes.update(v.prime for v in gamma.support() if v.is_finite)
    primes -= set(finite_primes(s))

    lcm = 1
    for d in degrees:
        lcm = lcm * d // gcd(lcm, d)
    for q in sorted(primes):
        v = Place(q)
        g = gamma.at(v)
        vals = [weil_local(f, p, v).value for f in forms]
        if mode == "i":
            for i in range(1, len(forms)):
                di = degrees[i]
                if vals[i] ** d0 > vals[0] ** di * g ** (d0 * di):
                    return False
        else:
            lhs = Fraction(1)
            for i in range(1, len(forms)):
                lhs *= vals[i] ** (lcm // degrees[i])
            if lhs > vals[0] ** (lcm // d0) * g ** lcm:
                return False
    return True


def strict_transform_local(f_d: MultiPoly, f_w: MultiPoly, p: ProjPoint,
                           v: Place) -> tuple[Fraction, Fraction]:
    """Local values (strict transform, subscheme) for blow-up data (D, W).

    The subscheme value is min(lambda_D, lambda_W); the strict-transform
    value is lambda_D divided by it, so it is 1 exactly when D is locally
    dominated by W at v.
    """
    val_d = weil_local(f_d, p, v).value
    val_y = weil_subscheme([(f_d, f_d.total_degree()), (f_w, f_w.total_degree())],
                           p, v).value
    return val_d / val_y, val_y
