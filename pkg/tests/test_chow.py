import random
from fractions import Fraction
from itertools import product

import pytest

from betachow.chow import (
    BlowupConfig,
    DivisorClass,
    config_classes,
    curve_family,
    curve_value,
    cyclic_config,
    e_class,
    marked_config,
    nef_test,
    parse_class_expr,
    pullback_hyperplane,
    strict_transform,
    top_intersection,
)


def brute_force_top(classes):
    """Independent oracle: distribute the product over the basis H, E_1..E_r
    and apply H^n = 1, E_i^n = (-1)^(n-1), mixed products = 0."""
    n, r = classes[0].n, classes[0].r
    total = Fraction(0)
    for pick in product(range(r + 1), repeat=n):  # 0 = H, 1+i = E_i
        coeff = Fraction(1)
        for cls, choice in zip(classes, pick):
            coeff *= cls.a if choice == 0 else -cls.b[choice - 1]
        if coeff == 0:
            continue
        if all(c == 0 for c in pick):
            total += coeff
        elif pick.count(pick[0]) == n and pick[0] != 0:
            total += coeff * Fraction(-1) ** (n - 1)
    return total


def rand_class(rng, n, r):
    return DivisorClass(n, r, Fraction(rng.randint(-6, 6), rng.randint(1, 3)),
                        tuple(Fraction(rng.randint(-4, 4)) for _ in range(r)))


def test_top_intersection_matches_brute_force():
    rng = random.Random(9)
    for n, r in ((2, 3), (2, 6), (3, 4)):
        for _ in range(40):
            classes = [rand_class(rng, n, r) for _ in range(n)]
            assert top_intersection(classes) == brute_force_top(classes)


def test_top_intersection_examples():
    cfg = cyclic_config(2, 6)
    cl = config_classes(cfg)
    assert top_intersection([cl["D"], cl["D"]]) == 12  # 36 - 6*4
    assert top_intersection([cl["H"], cl["H"]]) == 1
    assert top_intersection([cl["D"], cl["Ht1"]]) == 2  # q - n^2


def test_top_intersection_validation():
    cfg = cyclic_config(2, 6)
    cl = config_classes(cfg)
    with pytest.raises(ValueError):
        top_intersection([cl["D"]])  # needs n classes
    other = DivisorClass(2, 3, 1, (0, 0, 0))
    with pytest.raises(ValueError, match="mismatched"):
        top_intersection([cl["D"], other])


def test_symmetry_and_multilinearity():
    rng = random.Random(13)
    for _ in range(30):
        a, b, c = (rand_class(rng, 3, 4) for _ in range(3))
        assert top_intersection([a, b, c]) == top_intersection([c, a, b])
        lam = Fraction(rng.randint(-3, 3), rng.randint(1, 2))
        left = top_intersection([a * lam + b, b, c])
        assert left == lam * top_intersection([a, b, c]) + top_intersection([b, b, c])


def test_intersection_identity_grid():
    for n in range(2, 7):
        for q in range(3 * n, 4 * n + 1):
            cl = config_classes(cyclic_config(n, q))
            d_cls = cl["D"]
            assert top_intersection([d_cls] * n) == q ** n - n ** n * q
            for k in range(n):
                for i in range(1, q + 1):
                    got = top_intersection([d_cls] * k + [cl[f"Ht{i}"]] * (n - k))
                    assert got == q ** k - n ** (k + 1)


def test_nd_minus_m_ht_closed_form():
    # (N*D - m*Ht_i)^n = (qN-m)^n - n(nN-m)^n - n^n(q-n)N^n
    rng = random.Random(17)
    for n, q in ((2, 6), (3, 9)):
        cl = config_classes(cyclic_config(n, q))
        for _ in range(10):
            big_n, m = rng.randint(1, 9), rng.randint(0, 25)
            cls = big_n * cl["D"] - m * cl["Ht1"]
            expect = (q * big_n - m) ** n - n * (n * big_n - m) ** n \
                - n ** n * (q - n) * big_n ** n
            assert top_intersection([cls] * n) == expect


def test_strict_transform():
    cfg = cyclic_config(2, 6)
    cl = config_classes(cfg)
    for i in range(1, 7):
        window = tuple(1 if j in cfg.incidence[i - 1] else 0 for j in range(6))
        assert strict_transform(2, 1, window) == cl[f"Ht{i}"]
    assert strict_transform(2, 1, (0,) * 6) == pullback_hyperplane(2, 6)
    marked = config_classes(marked_config(2), ell=1)
    assert marked["Ht1"] == strict_transform(2, 1, (1, 0, 0))
    assert marked["Ht4"] == pullback_hyperplane(2, 3)
    with pytest.raises(ValueError):
        strict_transform(2, 0, (0,))
    with pytest.raises(ValueError):
        strict_transform(2, 1, (-1,))


def test_config_classes_examples():
    cl = config_classes(cyclic_config(2, 6))
    assert cl["D"] == DivisorClass(2, 6, 6, (2,) * 6)
    marked = config_classes(marked_config(2), ell=10)
    assert marked["A"] == DivisorClass(2, 3, 31, (10, 10, 10))
    assert top_intersection([marked["A"]] * 2) == 661
    with pytest.raises(ValueError):
        config_classes(marked_config(2))  # ell required


def test_marked_leading_terms():
    # A^(n-1).Ht_i has leading coefficient (n+1)^(n-1)-1 (i <= n+1)
    # and (n+1)^(n-1) (i >= n+2); the ratio converges as ell grows.
    for n in (2, 3, 4):
        for index, const in ((1, (n + 1) ** (n - 1) - 1), (n + 2, (n + 1) ** (n - 1))):
            gaps = []
            for ell in (100, 10_000):
                cl = config_classes(marked_config(n), ell)
                val = top_intersection([cl["A"]] * (n - 1) + [cl[f"Ht{index}"]])
                gaps.append(abs(Fraction(val, ell ** (n - 1)) - const))
            assert gaps[1] < Fraction(gaps[0], 50)


def test_config_validation():
    with pytest.raises(ValueError):
        cyclic_config(2, 5)  # q < 3n
    with pytest.raises(ValueError):
        BlowupConfig(2, "cyclic", 6, 5, tuple(frozenset() for _ in range(6)))
    with pytest.raises(ValueError):
        BlowupConfig(2, "weird", 6, 6, tuple(frozenset() for _ in range(6)))


def test_nef_certified_family():
    for n, q in ((2, 6), (3, 9)):
        cfg = cyclic_config(n, q)
        cl = config_classes(cfg)
        for m in range(n + 1):
            for i in range(1, q + 1):
                res = nef_test(cl["D"] - m * cl[f"Ht{i}"], cfg)
                assert res.status == "certified-nef"
                assert "0 <= m <= n" in res.certificate


def test_nef_failure_witness():
    cfg = cyclic_config(2, 6)
    res = nef_test(-1 * e_class(2, 6, 0), cfg)
    assert res.status == "fails-witness"
    assert res.witness.kind == "exceptional-line"
    assert res.witness.points == (0,)
    assert res.min_value == -1


def test_nef_m_beyond_family():
    cfg = cyclic_config(2, 6)
    cl = config_classes(cfg)
    res = nef_test(cl["D"] - 3 * cl["Ht1"], cfg)  # m = n+1
    assert res.status in ("fails-witness", "inconclusive")
    assert res.status == "fails-witness"  # window b-entries go negative


def test_nef_marked_classes():
    cfg = marked_config(2)
    cl = config_classes(cfg, ell=10)
    assert nef_test(cl["A"], cfg).status == "certified-nef"
    for i in range(1, 5):
        assert nef_test(cl[f"Ht{i}"], cfg).status == "certified-nef"
    bad = DivisorClass(2, 3, 1, (1, 1, 0))  # line through two points: 1-1-1 < 0
    assert nef_test(bad, cfg).status == "fails-witness"


def test_nef_never_certified_with_negative_witness():
    rng = random.Random(23)
    cfg = cyclic_config(2, 6)
    for _ in range(200):
        cls = rand_class(rng, 2, 6)
        res = nef_test(cls, cfg)
        values = [curve_value(cls, c) for c in curve_family(cfg)]
        if res.status == "certified-nef":
            assert all(v >= 0 for v in values)
        if any(v < 0 for v in values):
            assert res.status == "fails-witness"


def test_json_round_trip():
    cls = DivisorClass(2, 3, Fraction(7, 2), (Fraction(1), Fraction(-2, 3), Fraction(0)))
    assert DivisorClass.from_json(cls.to_json()) == cls
    assert cls.to_json()["a"] == "7/2"


def test_parse_class_expr():
    cfg = cyclic_config(2, 6)
    cl = config_classes(cfg)
    assert parse_class_expr("D-2*Ht1", cfg) == cl["D"] - 2 * cl["Ht1"]
    assert parse_class_expr("-E1", cfg) == -1 * e_class(2, 6, 0)
    assert parse_class_expr("3*H", cfg) == 3 * cl["H"]
    with pytest.raises(ValueError):
        parse_class_expr("D + Q7", cfg)
