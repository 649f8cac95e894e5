import pytest

from conftest import ideal
from qheights.ideals import VarietySpec, is_projectively_empty
from qheights.polyring import parse_poly
from qheights.position import (
    NotInPosition, ReplacementNotFound, check_subgeneral, meets_on, replace_hypersurfaces,
)

P2 = VarietySpec.projective_space(2)
CONIC = VarietySpec.from_ideal(ideal(3, "x0*x2 - x1^2"))


def forms(*ss, n=3):
    return [parse_poly(s, n) for s in ss]


GENERAL = forms("x0", "x1", "x2", "x0 + x1 + x2")
LINES4 = forms("x0", "x1", "x0 + x1", "x2")


def test_subgeneral_verdicts():
    assert check_subgeneral(P2, GENERAL, 2).holds
    rep = check_subgeneral(P2, LINES4, 2)
    assert not rep.holds and rep.witness == (0, 1, 2)
    assert meets_on(P2, [LINES4[j] for j in rep.witness])
    assert check_subgeneral(P2, LINES4, 3).holds


@pytest.mark.parametrize("Qs", [GENERAL, LINES4, forms("x0", "x0 + x1", "x1", "x2", "x1 - x0")])
def test_subgeneral_monotone_in_N(Qs):
    verdicts = [check_subgeneral(P2, Qs, N).holds for N in range(2, len(Qs))]
    first = verdicts.index(True)
    assert all(verdicts[first:])


def test_subgeneral_errors():
    with pytest.raises(ValueError):
        check_subgeneral(P2, GENERAL, 4)
    with pytest.raises(ValueError):
        check_subgeneral(P2, GENERAL, 1)


def check_structure(V, Qs, res):
    n, N = V.dim, len(Qs) - 1
    assert len(res.P) == n + 1
    assert res.P[0] == Qs[0]
    for t in range(2, n + 2):
        assert res.support(t) <= set(range(2, N - n + t + 1))
        total = None
        for j in res.support(t):
            term = Qs[j - 1].scale(res.coeffs[(t, j)])
            total = term if total is None else total + term
        assert total == res.P[t - 1]
    assert is_projectively_empty(V.ideal.extend(res.P))


def test_replace_lines4_selection():
    res = replace_hypersurfaces(P2, LINES4, seed=0)
    assert res.attempts == 2  # (c22, c33) = (1, 1) meets at (0:0:1)
    assert [str(p) for p in res.P] == ["x0", "x1", "x2"]
    assert res.coeffs[(2, 2)] == 1 and res.coeffs[(2, 3)] == 0
    assert res.coeffs[(3, 2)] == 0 and res.coeffs[(3, 3)] == 0 and res.coeffs[(3, 4)] == 1
    check_structure(P2, LINES4, res)


def test_replace_general_position_is_identity():
    res = replace_hypersurfaces(P2, GENERAL)
    assert res.P == tuple(GENERAL[:3]) and res.attempts == 1


P1 = VarietySpec.projective_space(1)
# x0*x1 meets both x0^2 and x1^2, so only a genuine combination works
NEEDS_MIX = forms("x0*x1", "x0^2", "x1^2", n=2)


@pytest.mark.parametrize("seed", range(10))
def test_replace_sound_and_deterministic(seed):
    res = replace_hypersurfaces(P1, NEEDS_MIX, seed=seed)
    assert res.attempts > 2 and res.support(2) == {2, 3}
    check_structure(P1, NEEDS_MIX, res)
    assert replace_hypersurfaces(P1, NEEDS_MIX, seed=seed) == res
    assert replace_hypersurfaces(P2, LINES4, seed=seed) == replace_hypersurfaces(P2, LINES4, seed=seed)


def test_replace_on_conic():
    Qs = forms("x0 + x1", "x1 - x2", "x0 + 2*x2", "x0 - x1 + 3*x2")
    assert check_subgeneral(CONIC, Qs, 3).holds
    for seed in range(3):
        res = replace_hypersurfaces(CONIC, Qs, seed=seed)
        check_structure(CONIC, Qs, res)


def test_replace_errors():
    with pytest.raises(NotInPosition, match="input not in position"):
        replace_hypersurfaces(P2, forms("x0", "x1", "x0 + x1"))
    with pytest.raises(ValueError):
        replace_hypersurfaces(P2, forms("x0", "x1^2", "x2", n=3))
    with pytest.raises(ReplacementNotFound, match="no replacement found within attempt budget"):
        replace_hypersurfaces(P1, NEEDS_MIX, max_attempts=2)
