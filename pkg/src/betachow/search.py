"""Desk-scale searches for S-integer divisibility and ideal-equality
predicates, with degeneracy analysis of the solution sets.

The ring of S-integers is infinite, so every search runs over an explicit
truncation: numerators bounded by B, denominators limited to products of
S-primes with a per-prime exponent cap.  The truncation parameters travel
with every solution set, outputs are deterministically ordered by
(max |numerator|, coordinates), and saved sets re-verify their predicate
witness-by-witness on load.

Degeneracy is reported, never asserted: kernel dimensions of the
monomial-evaluation matrix bound the geometry of the solutions up to a
degree cutoff, and nothing more is claimed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import gcd
from typing import Callable, Iterable, Sequence

from .heights import ProjPoint, support_primes
from .linalg import kernel_basis
from .poly import MultiPoly, hyperplanes_general_position, monomial_exponents, parse_poly
from .primes import vp


@dataclass(frozen=True)
class SRing:
    """Ring of S-integers: denominators restricted to the listed primes."""

    primes: tuple[int, ...] = ()

    def __post_init__(self):
        from .primes import is_prime
        ps = tuple(self.primes)
        if list(ps) != sorted(set(ps)) or not all(is_prime(p) for p in ps):
            raise ValueError("S must be a strictly ascending list of primes")
        object.__setattr__(self, "primes", ps)

    def strip_s_part(self, n: int) -> int:
        for p in self.primes:
            while n % p == 0:
                n //= p
        return n

    def contains(self, x: Fraction | int) -> bool:
        if isinstance(x, int):
            return True
        return self.strip_s_part(x.denominator) == 1


def divides_in_OS(a: Fraction | int, b: Fraction | int, s: SRing) -> bool:
    """Whether a divides b in the ring of S-integers: v_p(b) >= v_p(a) for
    every prime p outside S, equivalently b/a is an S-integer."""
    if a == 0:
        raise ValueError("division by zero in the S-integer ring")
    if not s.contains(a) or not s.contains(b):
        raise ValueError("inputs outside the ring of S-integers")
    if b == 0:
        return True
    if isinstance(a, int) and isinstance(b, int) and not s.primes:
        return b % a == 0
    q = Fraction(b) / Fraction(a)
    return s.strip_s_part(q.denominator) == 1


@dataclass(frozen=True)
class SearchBox:
    """Truncation of O_S^n: numerators in [-B, B], denominators products
    of S-primes with exponent at most denom_cap each."""

    dim: int
    bound: int
    denom_cap: int = 0

    def __post_init__(self):
        if self.dim < 1 or self.bound < 0 or self.denom_cap < 0:
            raise ValueError("invalid search box")

    def coordinate_values(self, s: SRing) -> list:
        """Sorted coordinate values; plain ints when no denominators occur."""
        if not s.primes or self.denom_cap == 0:
            return list(range(-self.bound, self.bound + 1))
        dens = [1]
        for p in s.primes:
            dens = [d * p ** e for d in dens for e in range(self.denom_cap + 1)]
        values = set()
        for den in dens:
            for num in range(-self.bound, self.bound + 1):
                if gcd(num, den) == 1 or den == 1:
                    values.add(Fraction(num, den))
        return sorted(values)


def _grade_key(point: tuple) -> tuple:
    return (max(abs(Fraction(c).numerator) for c in point), tuple(Fraction(c) for c in point))


# ---------------------------------------------------------------------------
# solution sets and persistence
# ---------------------------------------------------------------------------

@dataclass
class SolutionSet:
    """Deterministically ordered solutions of one predicate over one box."""

    descriptor: dict
    points: list[tuple] = field(default_factory=list)
    witnesses: list[dict] = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.points)

    def sort(self):
        order = sorted(range(len(self.points)), key=lambda i: _grade_key(self.points[i]))
        self.points = [self.points[i] for i in order]
        self.witnesses = [self.witnesses[i] for i in order]

    def record_lines(self) -> list[str]:
        lines = []
        for pt, wit in zip(self.points, self.witnesses):
            lines.append(json.dumps({
                "point": [str(c) for c in pt],
                "witnesses": wit,
                "predicate": self.descriptor["kind"],
            }, sort_keys=True))
        return lines


def _witness_map(values: Sequence[Fraction | int], s: SRing) -> dict:
    """Per-prime valuations of the checked values (null for a zero value),
    over the support primes outside S."""
    out: dict[str, list] = {}
    nonzero = [v for v in values if v != 0]
    for p in support_primes(nonzero):
        if p in s.primes:
            continue
        out[str(p)] = [vp(v, p) if v != 0 else None for v in values]
    return out


# ---------------------------------------------------------------------------
# affine divisibility search (unit-equation generalization)
# ---------------------------------------------------------------------------

def _cor12_predicate(g: MultiPoly, s: SRing) -> Callable[[tuple], tuple[bool, object, object]]:
    g_const = g.evaluate((0,) * g.nvars) if g.total_degree() <= 0 else None

    def check(xs: tuple):
        total = 0
        prod = 1
        for x in xs:
            total = total + x
            prod = prod * x
        a = prod * (1 - total)
        b = g_const if g_const is not None else g.evaluate(xs)
        if a == 0:
            return b == 0, a, b
        return divides_in_OS(a, b, s), a, b

    return check


def search_cor12(g: MultiPoly, box: SearchBox, s: SRing,
                 workers: int = 1, first_values: Sequence | None = None) -> SolutionSet:
    """All tuples x in the box with (1 - sum x_i) * prod x_i dividing g(x)
    in the S-integers.

    g must have degree <= 1, S-integer coefficients, and be nonzero at the
    origin and at each unit vector.
    """
    n = box.dim
    if g.nvars != n:
        raise ValueError("g must live in the box's variables")
    if g.total_degree() > 1 or g.is_zero():
        raise ValueError("degenerate g: degree must be <= 1 and g nonzero")
    if any(not s.contains(c) for c in g.terms.values()):
        raise ValueError("g must have S-integer coefficients")
    if g.evaluate((0,) * n) == 0:
        raise ValueError("degenerate g: vanishes at the origin")
    for i in range(n):
        unit = tuple(1 if j == i else 0 for j in range(n))
        if g.evaluate(unit) == 0:
            raise ValueError("degenerate g: vanishes at a unit vector")

    values = box.coordinate_values(s)
    firsts = list(first_values) if first_values is not None else values
    check = _cor12_predicate(g, s)
    sols: list[tuple] = []
    if workers > 1 and len(firsts) >= 2 * workers:
        import multiprocessing as mp
        chunks = _split(firsts, workers)
        args = [(g, s, n, values, chunk) for chunk in chunks]
        with mp.get_context("fork").Pool(workers) as pool:
            for part in pool.map(_cor12_chunk, args):
                sols.extend(part)
    else:
        for x0 in firsts:
            for rest in product(values, repeat=n - 1):
                xs = (x0, *rest)
                if check(xs)[0]:
                    sols.append(xs)

    descriptor = {
        "kind": "cor12",
        "g": str(g),
        "dim": n,
        "bound": box.bound,
        "denom_cap": box.denom_cap,
        "s_primes": list(s.primes),
        "projective": False,
    }
    out = SolutionSet(descriptor)
    for xs in sols:
        _, a, b = check(xs)
        factors = list(xs) + [1 - sum(Fraction(x) for x in xs)]
        out.points.append(tuple(Fraction(x) for x in xs))
        out.witnesses.append(_witness_map([*factors, a, b], s))
    out.sort()
    return out


def _cor12_chunk(args):
    g, s, n, values, firsts = args
    check = _cor12_predicate(g, s)
    part = []
    for x0 in firsts:
        for rest in product(values, repeat=n - 1):
            xs = (x0, *rest)
            if check(xs)[0]:
                part.append(xs)
    return part


def _split(items: list, parts: int) -> list[list]:
    size, rem = divmod(len(items), parts)
    out, start = [], 0
    for i in range(parts):
        end = start + size + (1 if i < rem else 0)
        if end > start:
            out.append(items[start:end])
        start = end
    return out


# ---------------------------------------------------------------------------
# projective divisibility search
# ---------------------------------------------------------------------------

def _iter_projective(bound: int, ncoords: int, firsts: Iterable[int] | None = None):
    """Normalized projective tuples: coprime, first nonzero positive."""
    rng = range(-bound, bound + 1)
    firsts = range(0, bound + 1) if firsts is None else firsts
    for x0 in firsts:
        if x0 < 0:
            continue
        for rest in product(rng, repeat=ncoords - 1):
            xs = (x0, *rest)
            g = 0
            for c in xs:
                g = gcd(g, c)
            if g != 1:
                continue
            if x0 == 0:
                first = next(c for c in xs if c != 0)
                if first < 0:
                    continue
            yield xs

def _int_evaluator(f: MultiPoly) -> Callable[[tuple], int]:
    """Fast integer evaluation for an integer-coefficient polynomial."""
    items = [(int(c), e) for e, c in f.terms.items()]
    if f.is_homogeneous() and f.total_degree() == 1:
        pairs = [(e.index(1), int(c)) for e, c in f.terms.items()]

        def lin(xs: tuple) -> int:
            return sum(c * xs[i] for i, c in pairs)

        return lin

    def ev(xs: tuple) -> int:
        total = 0
        for c, e in items:
            v = c
            for x, k in zip(xs, e):
                if k == 1:
                    v *= x
                elif k:
                    v *= x ** k
            total += v
        return total

    return ev


def search_thm11(forms: Sequence[MultiPoly], g_form: MultiPoly, mode: str,
                 box: SearchBox, s: SRing,
                 assert_general_position: bool = False,
                 firsts: Sequence[int] | None = None) -> SolutionSet:
    """Projective points with coprime coordinates where the divisibility
    holds in the S-integers: mode 'i' asks F_i(x) | G(x) for every i,
    mode 'ii' asks prod F_i(x) | G(x); points where any F_i or G vanishes
    are excluded.  firsts restricts the first coordinate (range sharding).
    """
    if mode not in ("i", "ii"):
        raise ValueError("mode must be 'i' or 'ii'")
    forms = list(forms)
    if not forms:
        raise ValueError("need at least one divisor form")
    ncoords = forms[0].nvars
    n = ncoords - 1
    if box.dim != n:
        raise ValueError("box dimension must match the projective dimension")
    degs = {f.total_degree() for f in forms}
    if len(degs) != 1 or not all(f.is_homogeneous() for f in forms):
        raise ValueError("degree hypothesis violated: the F_i must be "
                         "homogeneous of one common degree")
    d = degs.pop()
    if g_form.nvars != ncoords or not g_form.is_homogeneous() \
            or g_form.is_zero() or g_form.total_degree() > d:
        raise ValueError("degree hypothesis violated: G must be homogeneous "
                         "of degree <= deg(F_i)")
    for f in [*forms, g_form]:
        if any(not s.contains(c) for c in f.terms.values()):
            raise ValueError("forms must have S-integer coefficients")
    if d == 1:
        arrangement = forms + ([g_form] if g_form.total_degree() == 1 else [])
        if not hyperplanes_general_position(arrangement):
            raise ValueError("hyperplanes not in general position")
    elif not assert_general_position:
        raise ValueError("general position must be asserted for "
                         "non-hyperplane hypersurfaces")

    r = len(forms)
    threshold_ok = r >= 2 * n + 1 if mode == "i" else r >= n + 2
    all_int = all(f.has_integer_coefficients() for f in [*forms, g_form])
    if all_int:
        evaluators = [_int_evaluator(f) for f in forms]
        g_eval = _int_evaluator(g_form)
    else:
        evaluators = [f.evaluate for f in forms]
        g_eval = g_form.evaluate
    sols = []
    for xs in _iter_projective(box.bound, ncoords, firsts):
        gval = g_eval(xs)
        if gval == 0:
            continue
        fvals = [ev(xs) for ev in evaluators]
        if any(v == 0 for v in fvals):
            continue
        if mode == "i":
            ok = all(divides_in_OS(v, gval, s) for v in fvals)
        else:
            prod_val = fvals[0]
            for v in fvals[1:]:
                prod_val = prod_val * v
            ok = divides_in_OS(prod_val, gval, s)
        if ok:
            sols.append((xs, fvals, gval))

    descriptor = {
        "kind": "thm11",
        "forms": [str(f) for f in forms],
        "g": str(g_form),
        "mode": mode,
        "dim": n,
        "bound": box.bound,
        "denom_cap": box.denom_cap,
        "s_primes": list(s.primes),
        "projective": True,
        "threshold_ok": threshold_ok,
        "assert_general_position": assert_general_position,
    }
    out = SolutionSet(descriptor)
    for xs, fvals, gval in sols:
        out.points.append(tuple(Fraction(c) for c in xs))
        out.witnesses.append(_witness_map([*fvals, gval], s))
    out.sort()
    return out


# ---------------------------------------------------------------------------
# ideal equality of consecutive windows
# ---------------------------------------------------------------------------

def ideal_window_sides(form_vps: Sequence[int], n: int,
                       coord_min_vp: int = 0) -> tuple[list[int], list[int]]:
    """Single-prime window arithmetic behind the ideal-equality predicate.

    Given the valuations of the q form values at one prime, returns for
    each index i the two sides of

      v(F_i(x)) + min_j v(x_j)  =  sum_{j=i-n+1..i} min_t v(F_{j+t}(x)),

    with all indices cyclic mod q and t running over 0..n-1.
    """
    q = len(form_vps)
    lhs, rhs = [], []
    for i in range(q):
        lhs.append(form_vps[i] + coord_min_vp)
        total = 0
        for j in range(i - n + 1, i + 1):
            total += min(form_vps[(j + t) % q] for t in range(n))
        rhs.append(total)
    return lhs, rhs


@dataclass(frozen=True)
class Thm16Result:
    overall: bool
    per_index: tuple[bool, ...]
    primes_checked: tuple[int, ...]


def ideal_equality_thm16(x: ProjPoint, forms: Sequence[MultiPoly],
                         s: SRing) -> Thm16Result:
    """Exact ideal-equality check for a cyclic family of q >= 3n linear
    forms in general position, at every prime outside S in the support."""
    forms = list(forms)
    ncoords = forms[0].nvars
    n = ncoords - 1
    q = len(forms)
    if q < 3 * n:
        raise ValueError("need q >= 3n linear forms")
    if not hyperplanes_general_position(forms):
        raise ValueError("forms must be hyperplanes in general position")
    values = [f.evaluate(x.coords) for f in forms]
    if any(v == 0 for v in values):
        raise ValueError("point on a hyperplane of the family")
    primes = [p for p in support_primes(values + list(x.coords))
              if p not in s.primes]
    per_index = [True] * q
    for p in primes:
        form_vps = [vp(v, p) for v in values]
        coord_min = min(vp(c, p) for c in x.coords if c != 0)
        lhs, rhs = ideal_window_sides(form_vps, n, coord_min)
        for i in range(q):
            if lhs[i] != rhs[i]:
                per_index[i] = False
    return Thm16Result(all(per_index), tuple(per_index), tuple(primes))


def search_thm16(forms: Sequence[MultiPoly], box: SearchBox, s: SRing,
                 firsts: Sequence[int] | None = None) -> SolutionSet:
    """Projective points where the window ideal equality holds at every
    index; points on any hyperplane of the family are skipped."""
    forms = list(forms)
    ncoords = forms[0].nvars
    if box.dim != ncoords - 1:
        raise ValueError("box dimension must match the projective dimension")
    sols = []
    for xs in _iter_projective(box.bound, ncoords, firsts):
        try:
            point = ProjPoint(tuple(xs))
        except ValueError:
            continue
        try:
            res = ideal_equality_thm16(point, forms, s)
        except ValueError:
            continue  # on a hyperplane
        if res.overall:
            sols.append((xs, [f.evaluate(xs) for f in forms]))
    descriptor = {
        "kind": "thm16",
        "forms": [str(f) for f in forms],
        "dim": ncoords - 1,
        "bound": box.bound,
        "denom_cap": box.denom_cap,
        "s_primes": list(s.primes),
        "projective": True,
    }
    out = SolutionSet(descriptor)
    for xs, fvals in sols:
        out.points.append(tuple(Fraction(c) for c in xs))
        out.witnesses.append(_witness_map(fvals, s))
    out.sort()
    return out


# ---------------------------------------------------------------------------
# persistence with re-verification
# ---------------------------------------------------------------------------

def solution_set_lines(sols: SolutionSet, version: str) -> list[str]:
    header = json.dumps({
        "artifact": "betachow", "version": version,
        "kind": "solution-set", "descriptor": sols.descriptor,
    }, sort_keys=True)
    return [header, *sols.record_lines()]


def save_solution_set(sols: SolutionSet, path: str, version: str):
    text = "\n".join(solution_set_lines(sols, version)) + "\n"
    with open(path, "w") as fh:
        fh.write(text)


def _reverify_point(descriptor: dict, point: tuple) -> bool:
    s = SRing(tuple(descriptor["s_primes"]))
    kind = descriptor["kind"]
    if kind == "cor12":
        g = parse_poly(descriptor["g"], descriptor["dim"])
        return _cor12_predicate(g, s)(point)[0]
    ncoords = descriptor["dim"] + 1
    forms = [parse_poly(t, ncoords) for t in descriptor["forms"]]
    if kind == "thm11":
        g_form = parse_poly(descriptor["g"], ncoords)
        fvals = [f.evaluate(point) for f in forms]
        gval = g_form.evaluate(point)
        if gval == 0 or any(v == 0 for v in fvals):
            return False
        if descriptor["mode"] == "i":
            return all(divides_in_OS(v, gval, s) for v in fvals)
        prod_val = Fraction(1)
        for v in fvals:
            prod_val *= v
        return divides_in_OS(prod_val, gval, s)
    if kind == "thm16":
        pt = ProjPoint(tuple(int(c) for c in point))
        return ideal_equality_thm16(pt, forms, s).overall
    raise ValueError(f"unknown predicate kind {kind!r}")


def load_solution_set(path: str, reverify: bool = True) -> SolutionSet:
    """Load a saved solution set; by default every stored point re-verifies
    its predicate (a mismatch raises)."""
    with open(path) as fh:
        lines = [line for line in fh.read().splitlines() if line.strip()]
    if not lines:
        raise ValueError("empty solution file")
    header = json.loads(lines[0])
    if header.get("kind") != "solution-set":
        raise ValueError("not a solution-set file")
    descriptor = header["descriptor"]
    out = SolutionSet(descriptor)
    for line in lines[1:]:
        rec = json.loads(line)
        point = tuple(Fraction(c) for c in rec["point"])
        if reverify and not _reverify_point(descriptor, point):
            raise ValueError(f"stored point {rec['point']} fails its predicate")
        out.points.append(point)
        out.witnesses.append(rec["witnesses"])
    return out


# ---------------------------------------------------------------------------
# degeneracy analysis
# ---------------------------------------------------------------------------

def vanishing_forms(points: Sequence[tuple], degree: int,
                    projective: bool = False) -> list[MultiPoly]:
    """Basis of forms of degree <= degree (affine) or exactly degree
    (projective) vanishing on all the points: the exact kernel of the
    monomial-evaluation matrix.  An empty basis means the points lie on no
    such hypersurface."""
    if degree < 1:
        raise ValueError("degree must be >= 1")
    if not points:
        raise ValueError("no points given")
    nvars = len(points[0])
    exps = monomial_exponents(nvars, degree, homogeneous=projective)
    rows = []
    for pt in points:
        row = []
        for e in exps:
            val = Fraction(1)
            for x, k in zip(pt, e):
                if k:
                    val *= Fraction(x) ** k
            row.append(val)
        rows.append(row)
    basis = kernel_basis(rows)
    return [MultiPoly(nvars, dict(zip(exps, vec))) for vec in basis]


def _divisors(n: int) -> list[int]:
    from .primes import factor
    divs = [1]
    for p, e in factor(n).items():
        divs = [d * p ** k for d in divs for k in range(e + 1)]
    return sorted(divs)


def _rational_roots(coeffs: Sequence[Fraction]) -> list[Fraction]:
    """Exact rational roots of sum_k coeffs[k] t^k (nonzero polynomial)."""
    denom = 1
    for c in coeffs:
        denom = denom * c.denominator // gcd(denom, c.denominator)
    ints = [int(c * denom) for c in coeffs]
    while ints and ints[-1] == 0:
        ints.pop()
    if not ints:
        raise ValueError("zero polynomial has every root")
    roots: set[Fraction] = set()
    low = next(i for i, c in enumerate(ints) if c != 0)
    if low > 0:
        roots.add(Fraction(0))
        ints = ints[low:]
    if len(ints) == 1:
        return sorted(roots)
    for p in _divisors(abs(ints[0])):
        for q in _divisors(abs(ints[-1])):
            for cand in (Fraction(p, q), Fraction(-p, q)):
                if sum(c * cand ** k for k, c in enumerate(ints)) == 0:
                    roots.add(cand)
    return sorted(roots)


def _restrict(f: MultiPoly, fixed_var: int, value: Fraction) -> list[Fraction]:
    """Coefficient list of f with x_fixed := value, in the other variable."""
    other = 1 - fixed_var
    deg = max(e[other] for e in f.terms)
    out = [Fraction(0)] * (deg + 1)
    for e, c in f.terms.items():
        out[e[other]] += c * value ** e[fixed_var]
    return out


def linear_factors_2var(f: MultiPoly) -> list[MultiPoly]:
    """Linear factors (with multiplicity) of a 2-variable polynomial over Q,
    found by exact rational root extraction on 1-variable restrictions."""
    if f.nvars != 2:
        raise ValueError("linear factor extraction works in 2 variables")
    factors: list[MultiPoly] = []
    rem = f
    while rem.total_degree() >= 1:
        hit = None
        for cand in _linear_factor_candidates(rem):
            quot = rem.divide_by_linear(cand)
            if quot is not None:
                hit = cand
                rem = quot
                break
        if hit is None:
            break
        factors.append(hit)
    return factors


def _primitive_form(terms: dict, nvars: int) -> MultiPoly:
    denom = 1
    for c in terms.values():
        denom = denom * c.denominator // gcd(denom, c.denominator)
    ints = {e: int(c * denom) for e, c in terms.items()}
    g = 0
    for c in ints.values():
        g = gcd(g, c)
    lead = min(ints, key=lambda e: (-sum(e), tuple(-x for x in e)))
    sign = 1 if ints[lead] > 0 else -1
    return MultiPoly(nvars, {e: Fraction(sign * c, g) for e, c in ints.items()})


def _linear_factor_candidates(f: MultiPoly) -> list[MultiPoly]:
    x = MultiPoly.variable(0, 2)
    cands: list[MultiPoly] = []
    deg_y = max(e[1] for e in f.terms)
    if deg_y == 0:
        # univariate in x0: factors x0 - root
        for root in _rational_roots(_restrict_to_x(f)):
            cands.append(x - MultiPoly.constant(root, 2))
        return cands
    # vertical factors x0 - c force the top x1-coefficient to vanish at c
    lead = [Fraction(0)] * (max(e[0] for e in f.terms) + 1)
    for e, c in f.terms.items():
        if e[1] == deg_y:
            lead[e[0]] += c
    if any(c != 0 for c in lead):
        for root in _rational_roots(lead):
            cands.append(x - MultiPoly.constant(root, 2))
    # non-vertical factors hit rational points on two test lines x0 = t
    tests: list[tuple[Fraction, list[Fraction]]] = []
    t = Fraction(0)
    while len(tests) < 2:
        coeffs = _restrict(f, 0, t)
        if any(c != 0 for c in coeffs):
            tests.append((t, _rational_roots(coeffs)))
        t += 1
    (t1, roots1), (t2, roots2) = tests
    for r1 in roots1:
        for r2 in roots2:
            # line through (t1, r1) and (t2, r2); t1 != t2 so not vertical
            slope = (r2 - r1) / (t2 - t1)
            terms = {(1, 0): -slope, (0, 1): Fraction(1),
                     (0, 0): slope * t1 - r1}
            cands.append(_primitive_form({e: c for e, c in terms.items() if c != 0}, 2))
    return cands


def _restrict_to_x(f: MultiPoly) -> list[Fraction]:
    deg = max(e[0] for e in f.terms)
    out = [Fraction(0)] * (deg + 1)
    for e, c in f.terms.items():
        out[e[0]] += c
    return out


def plane_linear_factors(f: MultiPoly, projective: bool) -> list[MultiPoly]:
    """Linear factors of a plane form; projective input is dehomogenized at
    x2 = 1 (powers of x2 split off first) and the factors rehomogenized."""
    if not projective:
        return linear_factors_2var(f)
    if f.nvars != 3 or not f.is_homogeneous():
        raise ValueError("projective factor extraction works on homogeneous P^2 forms")
    factors: list[MultiPoly] = []
    x2 = MultiPoly.variable(2, 3)
    rem = f
    while True:
        quot = rem.divide_by_linear(x2)
        if quot is None:
            break
        factors.append(x2)
        rem = quot
    affine = MultiPoly(2, {(e[0], e[1]): c for e, c in rem.terms.items()})
    for lf in linear_factors_2var(affine):
        terms = {}
        for e, c in lf.terms.items():
            terms[(e[0], e[1], 1 - e[0] - e[1])] = c
        factors.append(MultiPoly(3, terms))
    return factors


@dataclass
class DegeneracyReport:
    descriptor: dict
    n_points: int
    kernel_dims: dict[int, int]
    kernel_forms: dict[int, list[MultiPoly]]
    line_components: list[dict]      # {"line": str, "count": int}
    splits_linearly: dict[int, list[bool]]
    growth: list[tuple[int, int]] | None = None

    def to_json(self) -> dict:
        return {
            "descriptor": self.descriptor,
            "n_points": self.n_points,
            "kernel_dims": {str(d): k for d, k in self.kernel_dims.items()},
            "kernel_forms": {str(d): [str(f) for f in fs]
                             for d, fs in self.kernel_forms.items()},
            "line_components": self.line_components,
            "splits_linearly": {str(d): v for d, v in self.splits_linearly.items()},
            "growth": self.growth,
        }


def degeneracy_report(points: Sequence[tuple], max_degree: int,
                      projective: bool = False,
                      growth: Sequence[tuple[int, int]] | None = None,
                      descriptor: dict | None = None) -> DegeneracyReport:
    """Vanishing-ideal kernel dimensions per degree, linear components with
    per-line point counts (plane case, via exact linear-factor extraction
    of the kernel forms), and the solution-count growth curve when the
    caller supplies counts per box bound."""
    points = [tuple(Fraction(c) for c in p) for p in points]
    kernel_dims: dict[int, int] = {}
    kernel_forms: dict[int, list[MultiPoly]] = {}
    splits: dict[int, list[bool]] = {}
    components: list[dict] = []
    if not points:
        return DegeneracyReport(descriptor or {}, 0, kernel_dims, kernel_forms,
                                components, splits,
                                list(growth) if growth is not None else None)
    plane = len(points[0]) == (3 if projective else 2)
    seen_lines: dict[str, MultiPoly] = {}
    for d in range(1, max_degree + 1):
        forms = vanishing_forms(points, d, projective)
        kernel_dims[d] = len(forms)
        kernel_forms[d] = forms
        if plane:
            per_form = []
            for f in forms:
                factors = plane_linear_factors(f, projective)
                per_form.append(sum(lf.total_degree() for lf in factors)
                                == f.total_degree())
                for lf in factors:
                    key = str(_primitive_form(lf.terms, lf.nvars))
                    seen_lines.setdefault(key, lf)
            splits[d] = per_form
        else:
            splits[d] = [False] * len(forms)
    for key, lf in seen_lines.items():
        count = sum(1 for p in points if lf.evaluate(p) == 0)
        components.append({"line": key, "count": count})
    components.sort(key=lambda rec: (-rec["count"], rec["line"]))
    return DegeneracyReport(descriptor or {}, len(points), kernel_dims,
                            kernel_forms, components, splits,
                            list(growth) if growth is not None else None)
