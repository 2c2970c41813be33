import random
from fractions import Fraction

import pytest

from betachow.heights import ProjPoint, make_place_set, theoremkey_condition
from betachow.poly import parse_poly
from betachow.search import (
    SearchBox,
    SRing,
    degeneracy_report,
    divides_in_OS,
    ideal_equality_thm16,
    ideal_window_sides,
    linear_factors_2var,
    load_solution_set,
    save_solution_set,
    search_cor12,
    search_thm11,
    search_thm16,
    vanishing_forms,
)

S_EMPTY = SRing(())


def test_sring_validation():
    with pytest.raises(ValueError):
        SRing((4,))
    with pytest.raises(ValueError):
        SRing((3, 2))
    assert SRing((2, 3)).contains(Fraction(5, 12))
    assert not SRing((2,)).contains(Fraction(1, 3))


def test_divides_examples():
    assert divides_in_OS(6, 12, S_EMPTY)
    assert divides_in_OS(4, 6, SRing((2,)))
    assert not divides_in_OS(4, 6, S_EMPTY)
    assert divides_in_OS(5, 0, S_EMPTY)
    with pytest.raises(ValueError):
        divides_in_OS(0, 3, S_EMPTY)
    with pytest.raises(ValueError):
        divides_in_OS(Fraction(1, 3), 1, SRing((2,)))


def test_divides_transitive():
    rng = random.Random(19)
    s = SRing((2, 5))
    for _ in range(300):
        a = Fraction(rng.randint(1, 50), 2 ** rng.randint(0, 3))
        b = a * rng.randint(1, 20) / Fraction(5) ** rng.randint(0, 2)
        c = b * rng.randint(1, 20)
        if divides_in_OS(a, b, s) and divides_in_OS(b, c, s):
            assert divides_in_OS(a, c, s)


def test_box_values():
    assert SearchBox(2, 2).coordinate_values(S_EMPTY) == [-2, -1, 0, 1, 2]
    vals = SearchBox(1, 2, denom_cap=1).coordinate_values(SRing((2,)))
    assert Fraction(1, 2) in vals and Fraction(3, 2) not in vals  # |num| <= 2
    assert Fraction(-1, 2) in vals
    assert sorted(vals) == vals


def test_cor12_frozen_solution_set():
    g = parse_poly("1", 2)
    sols = search_cor12(g, SearchBox(2, 100), S_EMPTY)
    assert sols.points == [(-1, 1), (1, -1), (1, 1)]
    # (-1,-1) excluded: the product is 3, which does not divide 1
    assert (Fraction(-1), Fraction(-1)) not in sols.points


def test_cor12_empty_box():
    g = parse_poly("1", 2)
    assert search_cor12(g, SearchBox(2, 0), S_EMPTY).points == []


def test_cor12_degenerate_g_rejected():
    with pytest.raises(ValueError, match="degenerate g"):
        search_cor12(parse_poly("x0", 2), SearchBox(2, 2), S_EMPTY)
    with pytest.raises(ValueError, match="degenerate g"):
        search_cor12(parse_poly("1-x0", 2), SearchBox(2, 2), S_EMPTY)
    with pytest.raises(ValueError):
        search_cor12(parse_poly("x0^2", 2), SearchBox(2, 2), S_EMPTY)


def test_cor12_monotone_in_s():
    g = parse_poly("x0+1", 2)
    base = search_cor12(g, SearchBox(2, 8), S_EMPTY)
    bigger = search_cor12(g, SearchBox(2, 8), SRing((2,)))
    assert set(base.points) <= set(bigger.points)


def test_cor12_workers_match_serial():
    g = parse_poly("1", 2)
    serial = search_cor12(g, SearchBox(2, 40), S_EMPTY, workers=1)
    parallel = search_cor12(g, SearchBox(2, 40), S_EMPTY, workers=3)
    assert serial.points == parallel.points


def test_cor12_witnesses_record_valuations():
    g = parse_poly("1", 2)
    sols = search_cor12(g, SearchBox(2, 3), SRing((3,)))
    for pt, wit in zip(sols.points, sols.witnesses):
        for prime in wit:
            assert int(prime) not in (3,)


def test_thm11_unit_coordinate_solutions():
    # coordinate forms against the constant G = 1 force unit coordinates
    forms = [parse_poly(t, 3) for t in ("x0", "x1", "x2")]
    g_form = parse_poly("1", 3)
    sols = search_thm11(forms, g_form, "i", SearchBox(2, 2), S_EMPTY)
    pts = {tuple(int(c) for c in p) for p in sols.points}
    assert pts == {(1, 1, 1), (1, 1, -1), (1, -1, 1), (1, -1, -1)}


def test_thm11_empty_box():
    forms = [parse_poly(t, 3) for t in ("x0", "x1", "x2")]
    g_form = parse_poly("x0+x1+x2", 3)
    assert search_thm11(forms, g_form, "i", SearchBox(2, 0), S_EMPTY).points == []


def test_thm11_mode_ii_solutions_reverify():
    forms = [parse_poly(t, 3) for t in ("x0", "x1", "x2", "x0+x1+x2")]
    g_form = parse_poly("x0+2*x1+4*x2", 3)
    sols = search_thm11(forms, g_form, "ii", SearchBox(2, 4), S_EMPTY)
    assert sols.count > 0
    for pt in sols.points:
        prod = Fraction(1)
        for f in forms:
            prod *= f.evaluate(pt)
        assert divides_in_OS(prod, g_form.evaluate(pt), S_EMPTY)


def test_thm11_degree_validation():
    with pytest.raises(ValueError, match="degree hypothesis"):
        search_thm11([parse_poly("x0", 3), parse_poly("x1^2", 3)],
                     parse_poly("x0", 3), "i", SearchBox(2, 1), S_EMPTY)
    with pytest.raises(ValueError, match="degree hypothesis"):
        search_thm11([parse_poly("x0", 3)], parse_poly("x0^2", 3), "i",
                     SearchBox(2, 1), S_EMPTY)
    with pytest.raises(ValueError, match="general position"):
        search_thm11([parse_poly(t, 3) for t in ("x0", "x1", "x0+x1")],
                     parse_poly("x2", 3), "i", SearchBox(2, 1), S_EMPTY)
    with pytest.raises(ValueError, match="asserted"):
        search_thm11([parse_poly("x0^2+x1^2", 3), parse_poly("x1^2+x2^2", 3)],
                     parse_poly("x0^2", 3), "i", SearchBox(2, 1), S_EMPTY)


def test_thm11_divisibility_implies_key_condition():
    forms = [parse_poly(f"x0+{i}*x1+{i * i}*x2", 3) for i in range(1, 6)]
    g_form = parse_poly("x0", 3)
    sols = search_thm11(forms, g_form, "i", SearchBox(2, 12), S_EMPTY)
    assert sols.count > 0
    for pt in sols.points:
        p = ProjPoint(tuple(int(c) for c in pt))
        assert theoremkey_condition(p, [g_form, *forms], make_place_set(), mode="i")


def test_ideal_window_sides_synthetic():
    # hand table: v(F_1..F_4) = (1,0,0,0), n = 2, coprime coordinates
    lhs, rhs = ideal_window_sides([1, 0, 0, 0], 2)
    assert lhs == [1, 0, 0, 0]
    assert rhs == [0, 0, 0, 0]  # every window min vanishes
    # balanced table where the equality holds at every index
    lhs2, rhs2 = ideal_window_sides([0, 0, 0, 0, 0, 0], 2)
    assert lhs2 == rhs2


def test_ideal_equality_all_units():
    forms = [parse_poly(f"x0+{i}*x1+{i * i}*x2", 3) for i in range(1, 7)]
    p = ProjPoint.normalize([1, 0, 0])  # every form value is 1
    res = ideal_equality_thm16(p, forms, S_EMPTY)
    assert res.overall and all(res.per_index)
    assert res.primes_checked == ()


def test_ideal_equality_failing_point():
    forms = [parse_poly(f"x0+{i}*x1+{i * i}*x2", 3) for i in range(1, 7)]
    # at [1:2:1] the form values are (i+1)^2, with 2-adic valuations
    # (2, 0, 4, 0, 2, 0): the window sums cannot reach the lhs at index 1
    p = ProjPoint.normalize([1, 2, 1])
    from betachow.primes import vp
    vals2 = [vp(f.evaluate(p.coords), 2) for f in forms]
    assert vals2 == [2, 0, 4, 0, 2, 0]
    lhs, rhs = ideal_window_sides(vals2, 2)
    assert lhs[0] == 2 and rhs[0] == 0  # hand check of the first window
    res = ideal_equality_thm16(p, forms, S_EMPTY)
    assert not res.overall
    assert not res.per_index[0]
    assert 2 in res.primes_checked


def test_ideal_equality_validation():
    forms = [parse_poly(t, 3) for t in ("x0", "x1", "x2")]
    with pytest.raises(ValueError, match="3n"):
        ideal_equality_thm16(ProjPoint.normalize([1, 1, 1]), forms, S_EMPTY)
    six = [parse_poly(f"x0+{i}*x1+{i * i}*x2", 3) for i in range(1, 7)]
    with pytest.raises(ValueError, match="hyperplane"):
        ideal_equality_thm16(ProjPoint.normalize([0, 1, -1]), six, S_EMPTY)


def test_search_thm16_runs():
    forms = [parse_poly(f"x0+{i}*x1+{i * i}*x2", 3) for i in range(1, 7)]
    sols = search_thm16(forms, SearchBox(2, 2), S_EMPTY)
    pts = {tuple(int(c) for c in p) for p in sols.points}
    assert (1, 0, 0) in pts
    for pt in sols.points:
        p = ProjPoint(tuple(int(c) for c in pt))
        assert ideal_equality_thm16(p, forms, S_EMPTY).overall


def test_persistence_round_trip(tmp_path):
    g = parse_poly("1", 2)
    sols = search_cor12(g, SearchBox(2, 30), SRing((2,)))
    path = tmp_path / "sols.jsonl"
    save_solution_set(sols, str(path), "0.0-test")
    loaded = load_solution_set(str(path))
    assert loaded.points == sols.points
    assert loaded.witnesses == sols.witnesses
    # corrupt a point: the loader must refuse it
    lines = path.read_text().splitlines()
    lines.append(lines[-1].replace('"1"', '"2"'))
    bad = tmp_path / "bad.jsonl"
    bad.write_text("\n".join(lines) + "\n")
    with pytest.raises(ValueError, match="fails its predicate"):
        load_solution_set(str(bad))


def test_vanishing_forms_examples():
    pts = [(1, 1), (1, -1), (-1, 1)]
    assert vanishing_forms(pts, 1) == []
    assert len(vanishing_forms(pts, 2)) == 3
    # few points always lie on a curve of degree d when the monomial count wins
    assert len(vanishing_forms(pts[:2], 1)) == 1
    collinear = [(0, 0), (1, 1), (2, 2)]
    basis = vanishing_forms(collinear, 1)
    assert len(basis) == 1
    assert all(basis[0].evaluate(p) == 0 for p in collinear)


def test_linear_factors():
    f = parse_poly("x0^2-1", 2)
    facs = sorted(str(t) for t in linear_factors_2var(f))
    assert facs == ["x0 + 1", "x0 - 1"]
    assert linear_factors_2var(parse_poly("x0^2+x1^2-1", 2)) == []
    sq = linear_factors_2var(parse_poly("x0^2-2*x0*x1+x1^2", 2))
    assert len(sq) == 2 and sq[0].divide_by_linear(sq[1]) is not None


def test_degeneracy_report_examples():
    pts = [(1, 1), (1, -1), (-1, 1)]
    rep = degeneracy_report(pts, 2)
    assert rep.kernel_dims == {1: 0, 2: 3}
    assert all(rep.splits_linearly[2])
    empty = degeneracy_report([], 2)
    assert empty.n_points == 0 and empty.kernel_dims == {}
    grown = degeneracy_report(pts, 1, growth=[(10, 3), (100, 3), (1000, 3)])
    assert grown.growth == [(10, 3), (100, 3), (1000, 3)]
    collinear = degeneracy_report([(0, 0), (1, 1), (2, 2)], 1)
    assert collinear.kernel_dims[1] == 1
    assert collinear.line_components[0]["count"] == 3
