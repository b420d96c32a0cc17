import itertools
import random

import pytest

from holpoisson.exactfield import image_basis, rank
from holpoisson.model import builtin, parse_form
from holpoisson.model.validation import _identities, identity_residual
from holpoisson.operators import (
    KindMismatch,
    Op,
    apply,
    b_pi,
    bracket_delpi,
    calibration_report,
    d,
    dbar,
    del_,
    delpi,
    dpi,
    exp_iota,
    form_of,
    iota_order,
    iota_pi,
    matrix,
    pi_polyvector,
    pi_sharp,
    schouten,
    vector_of,
)
from holpoisson.model.core import Monomial, PolyvectorExpr

import corpus


def pv(model, text):
    """Polyvector from ``"1 X1^X3"``-style text with an empty anti part."""
    from holpoisson.model.parser import parse_expression

    terms = {}
    for c, names in parse_expression(text):
        idx = tuple(sorted(int(n[1:]) - 1 for n in names))
        terms[Monomial(idx, model.unit().anti)] = c
    return PolyvectorExpr._wrap(model, terms)


# ---------------------------------------------------------------------------
# calibration anchors and worked examples

def test_calibration_selects_single_convention():
    report = calibration_report()
    hits = {row["order"]: row["anchors_reproduced"] for row in report["candidates"]}
    assert all(hits[report["chosen"]]) and len(hits[report["chosen"]]) >= 2
    assert [o for o, h in hits.items() if all(h)] == [iota_order()]


def test_anchor_iwasawa6():
    m = builtin("iwasawa6", "pi2")
    assert str(delpi(parse_form(m, "1 w1^w2^w3^w5^w6"))) == "-1 w1^w4^w5^w6"


def test_anchor_nakamura():
    for case in ("nakamura_case1", "nakamura_case2"):
        m = builtin(case, "pi12")
        assert str(delpi(parse_form(m, "1 w2"))) == "-1"


def test_iota_kills_antiholomorphic_forms():
    m = builtin("iwasawa3")
    for q in range(4):
        for x in m.basis(0, q):
            assert not iota_pi(m.monomial_form(x)).terms


def test_matrix_examples():
    m = builtin("iwasawa3")
    assert rank(matrix(Op.DBAR, m, 0, 1)) == 1
    for p, q in m.bidegrees():
        if p >= 1:
            assert matrix(Op.DELPI, m, p, q).is_zero()
    assert matrix(Op.IOTA, m, 1, 0).rows == 0


def test_exp_iota_example():
    m = builtin("iwasawa3", "1 X1^X2")
    assert str(exp_iota(parse_form(m, "1 w1^w2"))) == "1 + 1 w1^w2"
    g = parse_form(m, "1 wb1^wb3")
    assert exp_iota(g) == g


def test_schouten_examples():
    m = builtin("iwasawa3")
    assert str(schouten(pv(m, "1 X1"), pv(m, "1 X3"))) == "1 X2"
    assert not schouten(pv(m, "1 X1"), pv(m, "1 X1")).terms
    assert not schouten(pi_polyvector(m), pi_polyvector(m)).terms
    assert not b_pi(pi_polyvector(m)).terms


def test_pi_sharp_examples():
    m = builtin("iwasawa6", "pi2")
    assert not pi_sharp(parse_form(m, "1 w2")).terms
    assert str(pi_sharp(parse_form(m, "1 w1"))) == "1 X3"
    g = parse_form(m, "1 wb1^wb4")
    assert str(pi_sharp(g)) == "1 wb1^wb4"


def test_bracket_by_matrices_on_iwasawa6():
    # [a,b] recomputed from the ∂_π matrices and the wedge product alone
    m = builtin("iwasawa6", "pi2")
    a, b = parse_form(m, "1 w1^w2^w3^w5^w6"), parse_form(m, "1 w4")
    k = 5

    def dp(f):
        (p, q), = f.components()
        return form_of(m, matrix(Op.DELPI, m, p, q).apply(vector_of(f, p, q)), p - 1, q)

    expect = (dp(a.wedge(b)) - dp(a).wedge(b) - a.wedge(dp(b)) * (-1) ** k) * (-1) ** k
    assert bracket_delpi(a, b) == expect


def test_unit_is_central():
    m = builtin("nakamura_case1", "pi12")
    one = m.monomial_form(m.unit())
    for f in corpus.forms(m):
        assert not bracket_delpi(one, f).terms


def test_kind_mismatch():
    m = builtin("iwasawa3")
    with pytest.raises(KindMismatch):
        apply(Op.DELPI, pi_polyvector(m))
    with pytest.raises(KindMismatch):
        apply(Op.BPI, parse_form(m, "1 w1"))


# ---------------------------------------------------------------------------
# property suites over the whole corpus

@pytest.mark.parametrize("case", corpus.CASES, ids=corpus.ids(corpus.CASES))
def test_operator_identities(case):
    m = corpus.get(*case)
    for name, combo in _identities():
        for p, q in m.bidegrees():
            if m.dim(p, q):
                res, _ = identity_residual(m, combo, p, q)
                assert res.is_zero(), (name, p, q)


@pytest.mark.parametrize("case", corpus.CASES, ids=corpus.ids(corpus.CASES))
def test_iota_power_commutator(case):
    # ι^k ∂ = ∂ ι^k + k ι^{k-1} ∂_π for k ≤ n
    m = corpus.get(*case)
    for f in corpus.forms(m):
        for k in range(1, m.n + 1):
            lhs, right, corr = del_(f), f, delpi(f)
            for _ in range(k):
                lhs = iota_pi(lhs)
                right = iota_pi(right)
            for _ in range(k - 1):
                corr = iota_pi(corr)
            assert lhs == del_(right) + corr * k


@pytest.mark.parametrize("case", corpus.CASES, ids=corpus.ids(corpus.CASES))
def test_exp_iota_conjugation(case):
    m = corpus.get(*case)
    for f in corpus.forms(m):
        e = exp_iota(f)
        assert exp_iota(del_(f)) == del_(e) + delpi(e)
        assert exp_iota(d(f)) == d(e) + delpi(e)
        assert exp_iota(e, -1) == f


@pytest.mark.parametrize("case", corpus.CASES, ids=corpus.ids(corpus.CASES))
def test_dpi_equals_delpi(case):
    m = corpus.get(*case)
    for f in corpus.forms(m):
        assert dpi(f) == delpi(f)


@pytest.mark.parametrize("case", corpus.CASES, ids=corpus.ids(corpus.CASES))
def test_pi_sharp_commutes_with_dbar(case):
    m = corpus.get(*case)
    for f in corpus.forms(m):
        assert pi_sharp(dbar(f)) == dbar(pi_sharp(f))


@pytest.mark.parametrize("case", corpus.CASES, ids=corpus.ids(corpus.CASES))
def test_pi_sharp_is_bracket_morphism_on_10_forms(case):
    m = corpus.get(*case)
    ones = [m.monomial_form(x) for x in m.basis(1, 0)]
    for a, b in itertools.product(ones, repeat=2):
        assert pi_sharp(bracket_delpi(a, b)) == schouten(pi_sharp(a), pi_sharp(b))


def _derivation_ok(a, b):
    k = a.total_degree()
    sign = -1 if (k - 1) % 2 else 1
    return all(op(bracket_delpi(a, b)) == bracket_delpi(op(a), b) + bracket_delpi(a, op(b)) * sign
               for op in (del_, dbar, d))


def _jacobi(a, b, c):
    ka, kb, kc = (x.total_degree() - 1 for x in (a, b, c))
    return (bracket_delpi(a, bracket_delpi(b, c)) * (-1) ** (ka * kc)
            + bracket_delpi(b, bracket_delpi(c, a)) * (-1) ** (kb * ka)
            + bracket_delpi(c, bracket_delpi(a, b)) * (-1) ** (kc * kb))


@pytest.mark.parametrize("name,poisson", [("iwasawa3", "default"), ("iwasawa3", "c1"), ("nakamura_case1", "pi12")])
def test_bracket_derivations_and_jacobi_exhaustive(name, poisson):
    m = builtin(name, poisson)
    forms = list(corpus.forms(m))
    for a, b in itertools.product(forms, repeat=2):
        assert _derivation_ok(a, b)
        ka, kb = a.total_degree(), b.total_degree()
        assert bracket_delpi(a, b) == bracket_delpi(b, a) * (-(-1) ** ((ka - 1) * (kb - 1)))
    low = [f for f in forms if f.total_degree() in (1, 2)]
    for a, b, c in itertools.product(low, repeat=3):
        assert not _jacobi(a, b, c).terms


def test_bracket_nontrivial_on_nakamura():
    m = builtin("nakamura_case1", "pi12")
    forms = list(corpus.forms(m))
    assert any(bracket_delpi(a, b).terms for a, b in itertools.product(forms, repeat=2))


def test_bracket_derivations_random_iwasawa6():
    m = builtin("iwasawa6", "pi2")
    forms = list(corpus.forms(m))
    rng = random.Random(7)
    for _ in range(300):
        assert _derivation_ok(rng.choice(forms), rng.choice(forms))


@pytest.mark.parametrize("case", corpus.SMALL, ids=corpus.ids(corpus.SMALL))
def test_bracket_of_del_closed_forms_is_del_exact(case):
    m = corpus.get(*case)
    closed = [f for f in corpus.forms(m) if not del_(f).terms]
    for a, b in itertools.product(closed, repeat=2):
        for (p, q), comp in bracket_delpi(a, b).components().items():
            assert p >= 1
            assert image_basis(matrix(Op.DEL, m, p - 1, q)).contains(vector_of(comp, p, q))


def test_pv_dbar_is_nonzero_on_kodaira_thurston():
    m = corpus.get("kodaira_thurston", "file")
    assert str(dbar(pv(m, "1 X1"))) == "-1 X2^wb1"
