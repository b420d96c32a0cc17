import glob
import itertools
import os
import random
from math import comb

import pytest

from holpoisson.exactfield import ONE, gr
from holpoisson.model import (
    Monomial,
    ModelError,
    ModelSyntaxError,
    PoissonBivector,
    UnknownBuiltin,
    UnknownGenerator,
    builtin,
    load_model,
    parse_bivector,
    parse_expression,
    parse_form,
    parse_model,
    print_model,
    validate,
)
from holpoisson.model.builtins import presets_for

from oracles import wedge_oracle

HERE = os.path.dirname(__file__)
CORPUS = os.path.join(HERE, "data", "conformance")
DOCS = os.path.join(HERE, os.pardir, "docs", "models")

BUILTINS = ["torus_1", "torus_2", "torus_3", "iwasawa3", "iwasawa6", "nakamura_case1", "nakamura_case2"]


@pytest.mark.parametrize("name", BUILTINS)
def test_print_parse_round_trip(name):
    m = builtin(name)
    text = print_model(m)
    again = parse_model(text)
    assert print_model(again) == text
    for p, q in m.bidegrees():
        assert again.basis(p, q) == m.basis(p, q)
        for x in m.basis(p, q):
            assert again.del_monomial(x) == m.del_monomial(x)
            assert again.dbar_monomial(x) == m.dbar_monomial(x)


@pytest.mark.parametrize("name", BUILTINS)
def test_basis_counts(name):
    m = builtin(name)
    for p, q in m.bidegrees():
        if m.kind == "free":
            assert m.dim(p, q) == comb(m.n, p) * comb(len(m.anti_names), q)
        else:
            assert m.dim(p, q) == comb(m.n, p) * len(m.coeff.names_of_degree(q))


def test_free_wedge_signs_match_permutation_oracle():
    m = builtin("iwasawa3")
    n = m.n
    rng = random.Random(1)
    monos = [x for p, q in m.bidegrees() for x in m.basis(p, q)]
    for _ in range(400):
        a, b = rng.choice(monos), rng.choice(monos)
        flat = lambda x: tuple(x.holo) + tuple(n + j for j in x.anti)
        expect = wedge_oracle(flat(a), flat(b))
        got = m.wedge_monomials(a, b)
        if expect is None:
            assert got is None
        else:
            sign, seq = expect
            assert got[0] == gr(sign)
            assert flat(got[1]) == seq


def test_tensor_product_is_graded_commutative():
    m = builtin("nakamura_case2")
    b1, b2 = Monomial((), "b1"), Monomial((), "b2")
    assert m.wedge_monomials(b1, b2) == (ONE, Monomial((), "b3"))
    assert m.wedge_monomials(b2, b1) == (ONE, Monomial((), "b3"))
    assert m.wedge_monomials(b1, b1) is None
    w = Monomial((0,), "b0")
    assert m.wedge_monomials(Monomial((), "b1"), w) == (-ONE, Monomial((0,), "b1"))


@pytest.mark.parametrize("path", sorted(glob.glob(os.path.join(CORPUS, "valid", "*.model"))))
def test_conformance_valid(path):
    m = load_model(path)
    text = print_model(m)
    assert print_model(parse_model(text)) == text
    assert validate(m).ok


@pytest.mark.parametrize("path", sorted(glob.glob(os.path.join(CORPUS, "invalid", "*.model"))))
def test_conformance_invalid(path):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    expect = text.splitlines()[0].split(":", 1)[1].split()
    kind = {"ModelSyntaxError": ModelSyntaxError, "UnknownGenerator": UnknownGenerator}[expect[0]]
    with pytest.raises(kind) as info:
        parse_model(text)
    if len(expect) == 3:
        assert (info.value.line, info.value.col) == (int(expect[1]), int(expect[2]))


def test_expression_parsing():
    raw = parse_expression("1/2 w1^w2 - i w3 + (1-2i) w1")
    assert [(str(c), names) for c, names in raw] == [("1/2", ["w1", "w2"]), ("-i", ["w3"]), ("1-2i", ["w1"])]
    m = builtin("iwasawa3")
    f = parse_form(m, "1 w2^w1 + 1 w1^w1")
    assert str(f) == "-1 w1^w2"
    assert f.bidegree == (2, 0)
    with pytest.raises(ModelSyntaxError):
        parse_expression("1 w1 +")
    with pytest.raises(UnknownGenerator):
        parse_form(m, "1 w9")


def test_bivector_normalisation():
    pi = parse_bivector("1 X2^X1 + 1/2 X1^X3", 3)
    assert pi.pairing(0, 1) == -ONE
    assert pi.pairing(1, 0) == ONE
    assert pi.format() == "-1 X1^X2 + 1/2 X1^X3"
    with pytest.raises(ModelError):
        parse_bivector("1 X1^X1 + 1 X1", 3)


def test_presets_and_errors():
    assert set(presets_for("iwasawa6")) >= {"pi1", "pi2"}
    assert builtin("iwasawa6", "pi2").poisson == builtin("iwasawa6", "1 X1^X3").poisson
    assert builtin("torus_1").poisson.is_zero()
    with pytest.raises(UnknownBuiltin):
        builtin("klein_bottle")
    with pytest.raises(UnknownGenerator):
        builtin("torus_1", "1 X1^X2")


@pytest.mark.parametrize("name", BUILTINS)
def test_builtins_validate_with_every_preset(name):
    for preset in presets_for(name):
        if preset == "bad" or (name == "torus_1" and preset == "std"):
            continue
        report = validate(builtin(name, preset))
        assert report.ok, report.failures()


COEFFS = ["0", "1", "-1", "i", "1/2"]


@pytest.mark.parametrize("c1,c2,c3", list(itertools.product(COEFFS, repeat=3)))
def test_iwasawa3_poisson_family(c1, c2, c3):
    m = builtin("iwasawa3", f"{c1} X1^X2 + {c2} X1^X3 + {c3} X2^X3")
    report = validate(m)
    assert report.ok == (gr(c2) == 0)
    if not report.ok:
        assert not report["schouten_pi"].passed


def test_kodaira_thurston_model_validates():
    m = load_model(os.path.join(DOCS, "kodaira_thurston.model"))
    assert m.dbar_monomial(m.generator_monomial("w2"))
    assert validate(m).ok


def test_validation_reports_witness_for_broken_axiom():
    text = "\n".join([
        "[model]", "name = broken", "kind = free", "dim = 4", "holo = w1 w2 w3 w4", "anti = v1 v2 v3 v4",
        "[del]", "w4 = 1 w1^w2", "w1 = 1 w3^w4",
    ])
    report = validate(parse_model(text))
    assert not report["d_squared"].passed
    assert all(c.witness for c in report.failures())


def test_poisson_bivector_rejects_bad_index():
    with pytest.raises(ModelError):
        builtin("iwasawa3").with_poisson(PoissonBivector({(0, 5): ONE}))
