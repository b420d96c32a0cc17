import itertools

import pytest

from holpoisson.exactfield import image_basis, kernel_basis, vstack
from holpoisson.lemmas import LemmaUnavailable, check_dpidbar
from holpoisson.mc import (
    MCSeries,
    NotClosed,
    Obstruction,
    PreconditionViolated,
    bracket_sum,
    delpi_close,
    gamma_potential,
    ks_residuals,
    residuals_vanish,
    solve_mc,
    tangent,
    verify_mc,
)
from holpoisson.model import builtin, parse_form
from holpoisson.model.core import FormExpr
from holpoisson.operators import Op, apply, bracket_delpi, dbar, delpi, form_of, matrix, vector_of


def closed_11_basis(m):
    """Basis of ``ker ∂̄ ∩ ker ∂_π`` in bidegree (1,1)."""
    ker = kernel_basis(vstack([matrix(Op.DBAR, m, 1, 1), matrix(Op.DELPI, m, 1, 1)]))
    return [form_of(m, v, 1, 1) for v in ker.vectors]


def i6_series(order=6):
    m = builtin("iwasawa6", "pi2")
    s = solve_mc(m, parse_form(m, "1 w2^wb1 + 1 w3^wb4"), order)
    assert isinstance(s, MCSeries)
    return m, s


def test_nakamura_pi23_order_10():
    for case in ("nakamura_case1", "nakamura_case2"):
        m = builtin(case, "pi23")
        alpha1 = parse_form(m, "1 w1^mu1" if case == "nakamura_case1" else "1 w1^b1")
        s = solve_mc(m, alpha1, 10)
        assert isinstance(s, MCSeries)
        assert len(s.alphas) == 10
        assert all(not a.terms for a in s.alphas[1:])
        assert residuals_vanish(m, s)
        assert all(not r.terms for r in ks_residuals(s).values())


def test_zero_seed_gives_zero_series():
    for name, poisson in [("iwasawa3", "default"), ("nakamura_case1", "pi23"), ("torus_2", "std")]:
        m = builtin(name, poisson)
        s = solve_mc(m, FormExpr._wrap(m, {}), 5)
        assert all(not a.terms for a in s.alphas)
        assert all(not r.terms for r in verify_mc(m, s).values())


def test_obstruction_on_iwasawa6_pi2():
    m = builtin("iwasawa6", "pi2")
    alpha1 = parse_form(m, "1 w2^wb1 + 1 w3^wb6")
    assert not dbar(alpha1).terms and not delpi(alpha1).terms
    ob = solve_mc(m, alpha1, 5)
    assert isinstance(ob, Obstruction)
    assert (ob.order, ob.failed_property, str(ob.gamma)) == (1, "NoZeta", "-2 w4^wb1^wb6")
    assert ob.to_dict()["failed_property"] == "NoZeta"


def test_obstruction_scan_finds_candidates():
    m = builtin("iwasawa6", "pi2")
    basis = closed_11_basis(m)
    found = 0
    for a, b in itertools.combinations(basis, 2):
        if isinstance(solve_mc(m, a + b, 2), Obstruction):
            found += 1
    assert found > 0
    assert all(isinstance(solve_mc(m, a, 3), MCSeries) for a in basis)


@pytest.mark.parametrize("case", ["nakamura_case1", "nakamura_case2"])
def test_lemma_model_never_obstructed(case):
    m = builtin(case, "pi23")
    assert check_dpidbar(m).holds
    basis = closed_11_basis(m)
    assert basis
    seeds = basis + [a + b for a, b in itertools.combinations(basis, 2)]
    for a in seeds:
        s = solve_mc(m, a, 5)
        assert isinstance(s, MCSeries), a
        assert residuals_vanish(m, s)


def test_iwasawa6_series_properties():
    m, s = i6_series(6)
    assert str(s.alpha(2)) == "1 w4^wb2"
    assert residuals_vanish(m, s)
    for k in range(2, 7):
        a = s.alpha(k)
        assert image_basis(matrix(Op.DELPI, m, 2, 1)).contains(vector_of(a, 1, 1)) if a.terms else True
    # parity cases k = 2l and k = 2l - 1
    for k in range(1, 6):
        gamma = bracket_sum(s.alphas, k)
        assert not dbar(gamma).terms
        if k >= 2:
            assert delpi(gamma_potential(s, k)) == gamma
    assert all(not r.terms for r in ks_residuals(s).values())


def test_corruption_is_detected():
    m, s = i6_series(4)
    for k, a in enumerate(s.alphas, 1):
        for mono in a.terms:
            for factor in (-1, 2):
                alphas = list(s.alphas)
                terms = dict(a.terms)
                terms[mono] = terms[mono] * factor
                alphas[k - 1] = FormExpr._wrap(m, terms)
                bad = MCSeries(m, s.order, alphas, s.betas, s.method)
                res = verify_mc(m, bad)
                assert any(r.terms for r in res.values()), (k, mono)
                if k >= 2:
                    assert res[k].terms


def test_preconditions():
    m = builtin("iwasawa6", "pi2")
    with pytest.raises(PreconditionViolated):
        solve_mc(m, parse_form(m, "1 w1^wb2"), 3)
    with pytest.raises(PreconditionViolated):
        solve_mc(m, parse_form(m, "1 w1^wb1"), 0)
    with pytest.raises(ValueError):
        solve_mc(m, parse_form(m, "1 w1^wb1"), 3, method="other")


def test_delpi_close():
    with pytest.raises(LemmaUnavailable):
        m = builtin("iwasawa3")
        delpi_close(m, parse_form(m, "1 w1^wb1"))
    i6 = builtin("iwasawa6", "pi2")
    with pytest.raises(NotClosed):
        delpi_close(i6, parse_form(i6, "1 w1^wb2"))
    # on the lemma-satisfying built-ins ∂_π already vanishes on ∂̄-closed (1,1) forms
    for name, poisson, method in [("nakamura_case1", "pi23", "dpidbar"), ("torus_2", "std", "deldbar")]:
        m = builtin(name, poisson)
        for a in closed_11_basis(m):
            assert delpi_close(m, a, method) == a


def test_deldbar_method_on_torus():
    m = builtin("torus_2", "std")
    s = solve_mc(m, parse_form(m, "1 w1^wb2"), 5, method="deldbar")
    assert isinstance(s, MCSeries)
    assert residuals_vanish(m, s)


def test_tangent():
    m = builtin("iwasawa6", "pi2")
    t = tangent(m, parse_form(m, "1 w1^wb1"))
    assert str(t.vector) == "1 X3^wb1" and t.dbar_closed
    assert not tangent(m, parse_form(m, "1 w2^wb1")).vector.terms
    with pytest.raises(NotClosed):
        tangent(m, parse_form(m, "1 w1^wb2"))


def test_bracket_of_alpha_lands_in_12():
    m, s = i6_series(3)
    for a, b in itertools.product(s.alphas, repeat=2):
        assert set(bracket_delpi(a, b).components()) <= {(1, 2)}


def test_series_serialises():
    _, s = i6_series(3)
    d = s.to_dict()
    assert d["alpha"]["2"] == "1 w4^wb2" and d["beta"]["2"]
    assert apply(Op.DELPI, s.betas[2]) == s.alpha(2)
