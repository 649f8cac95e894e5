import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from conftest import ideal
from oracles import brute_hilbert_weight, independent_bases, sympy_chow_weight
from qheights.chow import (
    ChowWeightResult, NotInGeneralPosition, WeightVector, bracket_weight_check, check_lemma_2_13,
    check_theorem_2_12, chow_form_hypersurface, chow_form_linear, chow_form_point,
    chow_form_projective_space, chow_weight, chow_weight_estimate, hilbert_weight,
)
from qheights.ideals import hilbert_function
from qheights.polyring import parse_point, parse_poly


def rand_c(rng, k):
    return [F(rng.randint(0, 12), rng.randint(1, 6)) for _ in range(k)]


def test_hilbert_weight_examples(p1, point_ideal, conic):
    S, basis = hilbert_weight(p1, 2, (1, 0))
    assert S == 3 and sorted(basis) == sorted([(2, 0), (1, 1), (0, 2)])
    for u in range(1, 6):
        assert hilbert_weight(point_ideal, u, (3, 5)) == (3 * u, [(u, 0)])
    S, basis = hilbert_weight(conic, 1, (1, 0, 0))
    assert S == 1 and len(basis) == 3


@pytest.mark.parametrize("name,umax", [("p1", 3), ("conic", 3), ("point_ideal", 4)])
def test_greedy_matches_exhaustive(request, name, umax):
    I = request.getfixturevalue(name)
    rng = random.Random(hash(name) % 1000)
    for u in range(1, umax + 1):
        bases = independent_bases(I, u)
        for _ in range(20):
            c = rand_c(rng, I.nvars)
            S, basis = hilbert_weight(I, u, c)
            assert S == brute_hilbert_weight(bases, c)
            assert len(basis) == hilbert_function(I, u)
            assert sorted(basis) in [sorted(B) for B in bases]


weights3 = st.lists(st.fractions(min_value=0, max_value=10, max_denominator=7), min_size=3, max_size=3)


@settings(max_examples=30, deadline=None)
@given(weights3, st.fractions(min_value=0, max_value=5, max_denominator=5), st.integers(1, 4))
def test_homogeneity(c, t, u):
    I = ideal(3, "x0*x2 - x1^2")
    S, _ = hilbert_weight(I, u, c)
    St, _ = hilbert_weight(I, u, [t * ci for ci in c])
    assert St == t * S
    CF = chow_form_hypersurface(I.generators[0])
    if t > 0:
        assert chow_weight(CF, [t * ci for ci in c]).value == t * chow_weight(CF, c).value


@settings(max_examples=30, deadline=None)
@given(weights3, weights3, st.integers(1, 4))
def test_monotonicity(c, d, u):
    I = ideal(3, "x0*x2 - x1^2")
    big = [a + b for a, b in zip(c, d)]
    assert hilbert_weight(I, u, big)[0] >= hilbert_weight(I, u, c)[0]


def test_chow_form_examples():
    assert str(chow_form_point(parse_point("(1:0)"))) == "u00"
    assert str(chow_form_point(parse_point("(0:1:0)"))) == "u01"
    assert str(chow_form_point(parse_point("(1:-2)"))) == "u00 - 2*u01"
    assert str(chow_form_projective_space(1)) == "u00*u11 - u01*u10"
    line = chow_form_linear([(1, 0, 0), (0, 1, 0)])
    assert str(line) == "u00*u11 - u01*u10"
    P2 = chow_form_projective_space(2)
    assert P2.degree == 1 and len(P2.poly.terms) == 6
    assert str(chow_form_hypersurface(parse_poly("x0", 2))) == "u01"
    assert str(chow_form_hypersurface(parse_poly("x0 + x1"))) == "-u00 + u01"
    conic = chow_form_hypersurface(parse_poly("x0*x2 - x1^2"))
    assert conic.degree == 2 and conic.blocks == 2
    with pytest.raises(ValueError, match="dependent basis"):
        chow_form_linear([(1, 2, 3), (2, 4, 6)])


def test_conic_chow_form_vanishes_on_meeting_lines():
    # two lines through the conic point (1:1:1) make the Chow form vanish
    CF = chow_form_hypersurface(parse_poly("x0*x2 - x1^2"))
    assert CF.poly((1, -1, 0, 0, 1, -1)) == 0
    assert CF.poly((0, 1, 0, 1, 0, 1)) != 0


def test_chow_weight_examples():
    assert chow_weight(chow_form_point(parse_point("(1:0)")), (3, 1)).value == 3
    conic = chow_form_hypersurface(parse_poly("x0*x2 - x1^2"))
    assert chow_weight(conic, (1, 0, 0)).value == 2
    assert sympy_chow_weight(conic, (1, 0, 0)) == 2


@pytest.mark.parametrize("m", [1, 2, 3])
def test_projective_space_weight(m):
    rng = random.Random(m)
    CF = chow_form_projective_space(m)
    for _ in range(5):
        c = rand_c(rng, m + 1)
        e = chow_weight(CF, c).value
        assert e == sum(c)
        assert sympy_chow_weight(CF, c) == e


def test_chow_weight_matches_sympy_random():
    rng = random.Random(5)
    forms = [chow_form_point(parse_point("(2:-3:1)")),
             chow_form_linear([(1, 2, 0), (0, 1, -1)]),
             chow_form_hypersurface(parse_poly("x0^2 + x1*x2 - 3*x2^2")),
             chow_form_hypersurface(parse_poly("x0*x2 - x1^2"))]
    for CF in forms:
        for _ in range(5):
            c = rand_c(rng, CF.block_size)
            assert chow_weight(CF, c).value == sympy_chow_weight(CF, c)


def test_estimate_contains_exact(point_ideal, p1, conic):
    cases = [
        (point_ideal, (1, 0), 2, 1),
        (p1, (1, 1), 3, 2),
        (conic, (1, 0, 0), 3, 2),
    ]
    for I, c, u, e in cases:
        for conv in ("dimension", "printed"):
            r = chow_weight_estimate(I, c, u, conv)
            assert r.contains(e) and not r.is_exact
    with pytest.raises(ValueError):
        chow_weight_estimate(conic, (1, 0, 0), 2)


def test_estimate_contains_exact_random(point_ideal, p1, conic):
    rng = random.Random(3)
    conic_cf = chow_form_hypersurface(conic.generators[0])
    point_cf = chow_form_point(parse_point("(1:0)"))
    for _ in range(10):
        for I, CF in ((point_ideal, point_cf), (p1, chow_form_projective_space(1)), (conic, conic_cf)):
            c = rand_c(rng, I.nvars)
            e = chow_weight(CF, c).value
            for u in (3, 4):
                assert chow_weight_estimate(I, c, u).contains(e)


def test_weight_inequality_examples(point_ideal, p1, conic):
    ok, margin = check_theorem_2_12(point_ideal, (1, 0), 2, 1)
    assert ok and margin == F(1, 2)  # S/(uH) - e/Delta = 0, correction 1/2
    ok, margin = check_theorem_2_12(p1, (1, 0), 3, 1)
    assert ok and margin == F(1, 2) - F(1, 2) + 1
    assert check_theorem_2_12(conic, (1, 1, 1), 3, 3)[0]


def test_subset_lower_bound_examples(point_ideal, p1, conic):
    assert check_lemma_2_13(point_ideal, (3, 1), [0], 3) == (True, 0)
    assert check_lemma_2_13(conic, (1, 0, 0), [0, 2], 2) == (True, 0)
    assert check_lemma_2_13(p1, (1, 1), [0, 1], 2) == (True, 0)
    with pytest.raises(NotInGeneralPosition, match="subset not in general position"):
        check_lemma_2_13(conic, (1, 0, 0), [0], 2)
    interval = ChowWeightResult(F(2), F(5), "estimated")
    assert check_lemma_2_13(conic, (1, 0, 0), [0, 2], interval) == (True, 0)


def test_bracket_weight_examples():
    assert bracket_weight_check([0, 1], (1, 2)) == (True, 3)
    assert bracket_weight_check([0], (5, 0)) == (True, 5)
    assert bracket_weight_check([0, 2], (1, 0, 4)) == (True, 5)
    with pytest.raises(ValueError):
        bracket_weight_check([0, 0], (1, 2))


def test_weight_vector_parse():
    c = WeightVector.parse("1/2,0,3")
    assert c == (F(1, 2), 0, 3) and str(c) == "1/2,0,3"
    with pytest.raises(ValueError):
        WeightVector.parse("1,-1")
