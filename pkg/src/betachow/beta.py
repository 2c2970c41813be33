"""Beta constants: exact closed forms, truncated section-count estimates,
and intersection-theoretic lower bounds.

For the cyclic configuration (q >= 3n hyperplanes on P^n) the constant has
an exact rational closed form; it is independently approximated by the
truncated sum over section counts, and the two routes must agree in the
limit.  For the marked configuration the Autissier-style bound produces an
exact rational lower bound from three intersection numbers.

All verdicts are exact; square roots are handled as rational interval
enclosures, never as floats.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, isqrt

from .chow import config_classes, marked_config, top_intersection


def g_aut(x: Fraction) -> Fraction:
    """Piecewise weight x^3/3 for x <= 1, x - 2/3 for x >= 1 (continuous)."""
    x = Fraction(x)
    if x <= 0:
        raise ValueError("g_aut needs a positive argument")
    return x ** 3 / 3 if x <= 1 else x - Fraction(2, 3)


@dataclass(frozen=True)
class AutissierInput:
    """Intersection data (A^n, A^(n-1).B, A^(n-2).B^2) for the bound."""

    n: int
    a_top: Fraction        # A^n
    a_b: Fraction          # A^(n-1).B
    a_b2: Fraction         # A^(n-2).B^2

    def __post_init__(self):
        object.__setattr__(self, "a_top", Fraction(self.a_top))
        object.__setattr__(self, "a_b", Fraction(self.a_b))
        object.__setattr__(self, "a_b2", Fraction(self.a_b2))
        if self.n < 2:
            raise ValueError("dimension must be >= 2")
        if self.a_top <= 0:
            raise ValueError("A^n must be positive (A big and nef)")
        if self.a_b == 0:
            raise ValueError("zero A^(n-1).B")
        if self.a_b < 0:
            raise ValueError("A^(n-1).B must be positive")


def beta_autissier_lower(inp: AutissierInput) -> Fraction:
    """Exact lower bound A^n/(2n A^(n-1).B) + ((n-1)A^(n-2).B^2/A^n) g(b),
    where b = A^n/(n A^(n-1).B)."""
    b = inp.a_top / (inp.n * inp.a_b)
    second = (inp.n - 1) * inp.a_b2 / inp.a_top * g_aut(b)
    return b / 2 + second


def autissier_input_marked(n: int, ell: int, index: int) -> AutissierInput:
    """Intersection data for B = Ht_index against A on the marked blow-up.

    index is 1-based; indices <= n+1 hit strict transforms through a point,
    larger ones are pullback hyperplanes.
    """
    cfg = marked_config(n)
    classes = config_classes(cfg, ell)
    a = classes["A"]
    b = classes[f"Ht{index}"]
    a_top = top_intersection([a] * n)
    a_b = top_intersection([a] * (n - 1) + [b])
    a_b2 = top_intersection([a] * (n - 2) + [b, b])
    return AutissierInput(n, a_top, a_b, a_b2)


def marked_target(n: int, ell: int, index: int) -> Fraction:
    """Per-index bound target: (n+1)l/2n, minus l/(2n(n+1)^(n-2)) for the
    pullback-hyperplane indices."""
    base = Fraction((n + 1) * ell, 2 * n)
    if index <= n + 1:
        return base
    return base - Fraction(ell, 2 * n * (n + 1) ** (n - 2))


def beta_exact_cyclic(n: int, q: int) -> Fraction:
    """Exact beta constant of the cyclic configuration."""
    if n < 2 or q < 3 * n:
        raise ValueError("cyclic beta needs n >= 2 and q >= 3n")
    num = q ** (n + 1) - (q - n) ** (n + 1) - n ** (n + 2) \
        - n ** (n + 1) * (n + 1) * (q - n)
    den = (n + 1) * (q ** n - n ** n * q)
    return Fraction(num, den)


def f_poly(n: int, q: int) -> Fraction:
    """Positivity polynomial (beta-1)(n+1)(q^n - n^n q) in expanded form."""
    if n < 2:
        raise ValueError("f_poly needs n >= 2")
    return Fraction(q ** (n + 1) - (q - n) ** (n + 1) - (n + 1) * q ** n
                    - (n * n - 1) * n ** n * (q - n) + n ** (n + 1))


def beta_numeric_cyclic(n: int, q: int, i: int, N: int) -> Fraction:
    """Leading-term truncation of the section-count ratio at cutoff N.

    sum_{m=1}^{nN} max(0, (qN-m)^n - n(nN-m)^n - n^n(q-n)N^n) over
    N^(n+1) (q^n - n^n q).  The value does not depend on the index i,
    which is accepted for interface symmetry with the exact route.
    """
    if N < 1:
        raise ValueError("cutoff N must be >= 1")
    if not 1 <= i <= q:
        raise ValueError("index i out of range")
    if n < 2 or q < 3 * n:
        raise ValueError("cyclic beta needs n >= 2 and q >= 3n")
    shift = n ** n * (q - n) * N ** n
    total = 0
    for m in range(1, n * N + 1):
        s = (q * N - m) ** n - n * (n * N - m) ** n - shift
        if s > 0:
            total += s
    return Fraction(total, N ** (n + 1) * (q ** n - n ** n * q))


@dataclass(frozen=True)
class H0LowerBound:
    """Exact main term of the section-count lower bound plus the symbolic
    error order, which is reported but never folded into exact verdicts."""

    value: Fraction
    error_order: str
    note: str = "implicit constant depends on the slope cap delta"


def autissier_h0_lower(n: int, a_top: Fraction, a_b: Fraction, a_b2: Fraction,
                       N: int, m: int, delta: Fraction) -> H0LowerBound:
    """Three-term lower bound for h^0(N*A - m*B) with 1 <= m <= delta*N."""
    if n < 2:
        raise ValueError("dimension must be >= 2")
    if not 1 <= m <= Fraction(delta) * N:
        raise ValueError("m out of range: need 1 <= m <= delta*N")
    a_top, a_b, a_b2 = Fraction(a_top), Fraction(a_b), Fraction(a_b2)
    value = (a_top * N ** n / factorial(n)
             - a_b * N ** (n - 1) * m / factorial(n - 1)
             + (n - 1) * a_b2 * N ** (n - 2) * min(m * m, N * N) / factorial(n))
    return H0LowerBound(value, f"O(N^{n - 1})")


# ---------------------------------------------------------------------------
# interval arithmetic for the single square root in the artifact
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RationalInterval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("empty interval")

    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, x: Fraction) -> bool:
        return self.lo <= Fraction(x) <= self.hi


def sqrt_enclosure(x: Fraction, max_width: Fraction = Fraction(1, 10 ** 12)) -> RationalInterval:
    """Rational interval [lo, hi] with lo^2 <= x <= hi^2; exact on squares."""
    x = Fraction(x)
    if x < 0:
        raise ValueError("square root of a negative rational")
    if x == 0:
        return RationalInterval(Fraction(0), Fraction(0))
    scale = 1
    while Fraction(1, x.denominator * scale) > max_width:
        scale *= 10
    num = x.numerator * x.denominator * scale * scale
    root = isqrt(num)
    den = x.denominator * scale
    lo = Fraction(root, den)
    if lo * lo == x:
        return RationalInterval(lo, lo)
    return RationalInterval(lo, Fraction(root + 1, den))


def countinglambda_rhs(ell: int, max_width: Fraction = Fraction(1, 10 ** 9)) -> RationalInterval:
    """Enclosure of (1/l)(1 + 1/(l*sqrt(l))) with exact rational endpoints."""
    if ell < 1:
        raise ValueError("ell must be >= 1")
    s = sqrt_enclosure(Fraction(ell), max_width / 10)
    hi = Fraction(1, ell) * (1 + Fraction(1, ell) / s.lo)
    lo = Fraction(1, ell) * (1 + Fraction(1, ell) / s.hi)
    return RationalInterval(lo, hi)


# ---------------------------------------------------------------------------
# reports and scans
# ---------------------------------------------------------------------------

@dataclass
class BetaReport:
    """One beta computation with every exact verdict spelled out."""

    descriptor: dict
    exact: Fraction | None = None
    lower_bound: Fraction | None = None
    numeric: Fraction | None = None
    cutoff: int | None = None
    claim: str = ""
    claim_holds: bool | None = None
    rows: list = field(default_factory=list)


def cyclic_beta_report(n: int, q: int, cutoff: int | None = None) -> BetaReport:
    exact = beta_exact_cyclic(n, q)
    numeric = beta_numeric_cyclic(n, q, 1, cutoff) if cutoff else None
    return BetaReport(
        descriptor={"config": "cyclic", "n": n, "q": q},
        exact=exact, numeric=numeric, cutoff=cutoff,
        claim="beta > 1", claim_holds=exact > 1)


def marked_beta_report(n: int, ell: int, index: int) -> BetaReport:
    bound = beta_autissier_lower(autissier_input_marked(n, ell, index))
    target = marked_target(n, ell, index)
    return BetaReport(
        descriptor={"config": "marked", "n": n, "ell": ell, "index": index},
        lower_bound=bound,
        claim=f"bound > {target}", claim_holds=bound > target)


def scan_cyclic(n_lo: int = 2, n_hi: int = 8, q_hi_mult: int = 12) -> list[dict]:
    """Exact scan of beta > 1 and f > 0 over n in [n_lo, n_hi], q in [3n, q_hi_mult*n].

    Each row also checks the defining identity f = (beta-1)(n+1)(q^n-n^nq).
    """
    rows = []
    for n in range(n_lo, n_hi + 1):
        for q in range(3 * n, q_hi_mult * n + 1):
            beta = beta_exact_cyclic(n, q)
            f = f_poly(n, q)
            identity = f == (beta - 1) * (n + 1) * (q ** n - n ** n * q)
            rows.append({
                "n": n, "q": q, "beta": beta, "f": f,
                "beta_gt_1": beta > 1, "f_gt_0": f > 0,
                "identity": identity,
                "ok": beta > 1 and f > 0 and identity,
            })
    return rows


def scan_f_monotone(n_lo: int = 2, n_hi: int = 8, q_hi_mult: int = 12) -> list[dict]:
    """Exact finite differences of f over the scan grid (increasing in q)."""
    rows = []
    for n in range(n_lo, n_hi + 1):
        for q in range(3 * n, q_hi_mult * n):
            d = f_poly(n, q + 1) - f_poly(n, q)
            rows.append({"n": n, "q": q, "difference": d, "ok": d > 0})
    return rows


def scan_marked(n_values=(2, 3, 4), ell_values=(10, 100, 1000)) -> list[dict]:
    """Exact scan of the marked bound against its per-index target.

    One low index (through a point) and one high index (pullback) suffice:
    the intersection data is identical within each group.
    """
    rows = []
    for n in n_values:
        for ell in ell_values:
            for index in (1, n + 2):
                rep = marked_beta_report(n, ell, index)
                rows.append({
                    "n": n, "ell": ell, "index": index,
                    "bound": rep.lower_bound,
                    "target": marked_target(n, ell, index),
                    "ok": rep.claim_holds,
                })
    return rows
