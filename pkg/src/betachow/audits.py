"""Empirical audits of the height inequalities on sampled rational points.

Both audits evaluate exact per-sample verdicts; claims that only hold "up
to a bounded function" are reported as boundedness data (the defect of the
max-term decomposition), never asserted as exact inequalities.

Sampling is seeded and deterministic, and sample batches can be sharded
across workers: rows are merged back in sample-index order so the output
does not depend on the worker count.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import log
from typing import Sequence

from .linalg import rank
from .poly import MultiPoly, hyperplanes_general_position
from .heights import (
    ARCH,
    Place,
    PlaceSet,
    ProjPoint,
    finite_primes,
    height,
    support_primes,
    weil_local,
)


def sample_points(dim: int, height_bound: int, count: int, seed: int) -> list[ProjPoint]:
    """Deterministic sample of normalized points with height <= bound."""
    rng = random.Random(seed)
    out: list[ProjPoint] = []
    while len(out) < count:
        coords = [rng.randint(-height_bound, height_bound) for _ in range(dim + 1)]
        if all(c == 0 for c in coords):
            continue
        out.append(ProjPoint.normalize(coords))
    return out


def independent_subsets(forms: Sequence[MultiPoly]) -> list[tuple[int, ...]]:
    """All index subsets whose linear forms are linearly independent,
    including the empty set."""
    vectors = [list(f.linear_coefficients()) for f in forms]
    nv = forms[0].nvars
    out: list[tuple[int, ...]] = [()]
    for size in range(1, min(len(forms), nv) + 1):
        for subset in combinations(range(len(forms)), size):
            if rank([vectors[i] for i in subset]) == size:
                out.append(subset)
    return out


@dataclass
class AuditRow:
    index: int
    point: ProjPoint
    on_support: bool
    lhs: Fraction | None = None
    rhs: str | None = None                   # height with its exponent, rendered
    verdict: bool | None = None
    per_place: dict = field(default_factory=dict)
    defect: Fraction | None = None           # multiplicative total over places
    defect_by_place: dict = field(default_factory=dict)

    def lhs_log(self) -> float | None:
        return None if self.lhs is None else log(self.lhs)


@dataclass
class AuditReport:
    kind: str
    descriptor: dict
    rows: list[AuditRow]

    @property
    def violators(self) -> list[AuditRow]:
        return [r for r in self.rows if r.verdict is False]

    @property
    def on_support_rows(self) -> list[AuditRow]:
        return [r for r in self.rows if r.on_support]

    def max_defect(self) -> Fraction | None:
        defects = [r.defect for r in self.rows if r.defect is not None]
        return max(defects) if defects else None


def _local_values(forms: Sequence[MultiPoly], p: ProjPoint,
                  places: Sequence[Place]) -> dict[Place, list[Fraction]]:
    return {v: [weil_local(f, p, v).value for f in forms] for v in places}


def _defect(values: list[Fraction], n: int) -> Fraction:
    """Sum of all local values over the best size-n term, multiplicatively."""
    best = Fraction(0)
    for subset in combinations(range(len(values)), n):
        prod = Fraction(1)
        for i in subset:
            prod *= values[i]
        best = max(best, prod)
    total = Fraction(1)
    for x in values:
        total *= x
    return total / best


def subspace_audit(forms: Sequence[MultiPoly], s: PlaceSet, eps: Fraction,
                   points: Sequence[ProjPoint], workers: int = 1) -> AuditReport:
    """Audit sum_{v in S} max_I sum_{i in I} lambda_i <= (n+1+eps) h(P).

    The max runs over linearly independent index subsets.  Each row also
    records the defect of the full sum against the best size-n term at
    every contributing place; per the decomposition lemma this defect
    should stay bounded as the height grows, which the caller checks
    empirically across height brackets.
    """
    if not hyperplanes_general_position(forms):
        raise ValueError("non-general-position input")
    eps = Fraction(eps)
    n = forms[0].nvars - 1
    subsets = independent_subsets(forms)
    payload = (list(forms), s, eps, n, subsets)
    rows = _run_sharded(_subspace_row, payload, list(points), workers)
    return AuditReport("subspace", {"epsilon": str(eps), "forms": [str(f) for f in forms],
                                    "s": sorted(str(v) for v in s)}, rows)


def _subspace_row(payload, idx: int, p: ProjPoint) -> AuditRow:
    forms, s, eps, n, subsets = payload
    values = [f.evaluate(p.coords) for f in forms]
    if any(v == 0 for v in values):
        return AuditRow(idx, p, on_support=True)
    s_places = [ARCH] + [Place(q) for q in finite_primes(s)]
    support = [Place(q) for q in support_primes(values + list(p.coords))
               if q not in set(finite_primes(s))]
    local = _local_values(forms, p, s_places + support)

    lhs = Fraction(1)
    per_place = {}
    for v in s_places:
        best = Fraction(1)  # empty subset contributes 1 (lambda sum of 0)
        for subset in subsets:
            prod = Fraction(1)
            for i in subset:
                prod *= local[v][i]
            best = max(best, prod)
        lhs *= best
        per_place[str(v)] = str(best)

    h = height(p)
    # lhs <= h^(n+1+eps), cross-powered to integer exponents
    den, num = eps.denominator, eps.numerator
    verdict = lhs ** den <= Fraction(h) ** ((n + 1) * den + num)
    rhs = f"{h}^({n + 1}+{eps})"

    defect_total = Fraction(1)
    defect_by_place = {}
    if len(forms) >= n:
        for v in s_places + support:
            d = _defect(local[v], n)
            if d != 1:
                defect_by_place[str(v)] = str(d)
            defect_total *= d
    return AuditRow(idx, p, False, lhs, rhs, verdict, per_place,
                    defect_total, defect_by_place)


def levin_duke_audit(forms: Sequence[MultiPoly], s: PlaceSet, eps: Fraction,
                     points: Sequence[ProjPoint], workers: int = 1,
                     assert_general_position: bool = False) -> AuditReport:
    """Audit sum_i (1/d_i) m_{D_i,S}(P) > (q-n-1-eps) h(P) per sample.

    General position is verified exactly in the hyperplane case; for
    higher-degree divisors the caller must assert it.
    """
    eps = Fraction(eps)
    degrees = [f.total_degree() for f in forms]
    if any(d < 1 or not f.is_homogeneous() for d, f in zip(degrees, forms)):
        raise ValueError("forms must be homogeneous of degree >= 1")
    if all(d == 1 for d in degrees):
        if not hyperplanes_general_position(forms):
            raise ValueError("non-general-position input")
    elif not assert_general_position:
        raise ValueError("general position must be asserted for "
                         "non-hyperplane divisors")
    n = forms[0].nvars - 1
    payload = (list(forms), degrees, s, eps, n)
    rows = _run_sharded(_levin_duke_row, payload, list(points), workers)
    return AuditReport("levin-duke", {"epsilon": str(eps), "forms": [str(f) for f in forms],
                                      "s": sorted(str(v) for v in s)}, rows)


def _levin_duke_row(payload, idx: int, p: ProjPoint) -> AuditRow:
    forms, degrees, s, eps, n = payload
    values = [f.evaluate(p.coords) for f in forms]
    if any(v == 0 for v in values):
        return AuditRow(idx, p, on_support=True)
    q = len(forms)
    lcm = 1
    for d in degrees:
        lcm = lcm * d // _gcd(lcm, d)
    s_places = [ARCH] + [Place(qq) for qq in finite_primes(s)]
    per_place = {}
    lhs = Fraction(1)
    for i, f in enumerate(forms):
        m_i = Fraction(1)
        for v in s_places:
            m_i *= weil_local(f, p, v).value
        per_place[f"m{i + 1}"] = str(m_i)
        lhs *= m_i ** (lcm // degrees[i])
    h = height(p)
    den, num = eps.denominator, eps.numerator
    # lhs^(1/lcm) > h^(q-n-1-eps), cross-powered
    verdict = lhs ** den > Fraction(h) ** ((q - n - 1) * lcm * den - lcm * num)
    rhs = f"{h}^({q - n - 1}-{eps})"
    return AuditRow(idx, p, False, lhs, rhs, verdict, per_place)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


# ---------------------------------------------------------------------------
# sharding
# ---------------------------------------------------------------------------

def _run_sharded(row_fn, payload, points: list[ProjPoint], workers: int) -> list[AuditRow]:
    if workers <= 1 or len(points) < 2 * workers:
        return [row_fn(payload, i, p) for i, p in enumerate(points)]
    import multiprocessing as mp

    chunks = _chunk_indices(len(points), workers)
    args = [(row_fn, payload, lo, hi, points[lo:hi]) for lo, hi in chunks]
    with mp.get_context("fork").Pool(workers) as pool:
        parts = pool.map(_shard_worker, args)
    rows: list[AuditRow] = []
    for part in parts:
        rows.extend(part)
    rows.sort(key=lambda r: r.index)
    return rows


def _shard_worker(arg):
    row_fn, payload, lo, _hi, points = arg
    return [row_fn(payload, lo + k, p) for k, p in enumerate(points)]


def _chunk_indices(total: int, parts: int) -> list[tuple[int, int]]:
    size, rem = divmod(total, parts)
    out = []
    start = 0
    for i in range(parts):
        end = start + size + (1 if i < rem else 0)
        if end > start:
            out.append((start, end))
        start = end
    return out
