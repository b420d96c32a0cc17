import json
import time
from math import comb

import pytest

from holpoisson.cohomology import (
    CohomologyTable,
    HodgeDiamond,
    aeppli,
    bott_chern,
    delpi_cohomology,
    dolbeault,
    kb_double_complex,
    kb_from_hodge,
    kb_homology,
    kunneth,
    lp_cohomology,
    parse_table,
    ss_e_infinity,
    ss_page,
)
from holpoisson.complexes import InvalidPage, dims_by_total, euler_characteristic
from holpoisson.exactfield import rank
from holpoisson.model import builtin
from holpoisson.operators import Op, matrix

import corpus
from oracles import complex_rank

# I_6 diamond as drawn: (x, y, value) with y = 30 - 5(p+q), x = 30 + 5(q-p)
I6_DRAWN = [
    (30, 30, 1), (25, 25, 6), (35, 25, 3), (20, 20, 15), (30, 20, 18), (40, 20, 5),
    (15, 15, 20), (25, 15, 45), (35, 15, 30), (45, 15, 6),
    (10, 10, 15), (20, 10, 60), (30, 10, 75), (40, 10, 36), (50, 10, 5),
    (5, 5, 6), (15, 5, 45), (25, 5, 100), (35, 5, 90), (45, 5, 30), (55, 5, 3),
    (0, 0, 1), (10, 0, 18), (20, 0, 75), (30, 0, 120), (40, 0, 75), (50, 0, 18), (60, 0, 1),
    (5, -5, 3), (15, -5, 30), (25, -5, 90), (35, -5, 100), (45, -5, 45), (55, -5, 6),
    (10, -10, 5), (20, -10, 36), (30, -10, 75), (40, -10, 60), (50, -10, 15),
    (15, -15, 6), (25, -15, 30), (35, -15, 45), (45, -15, 20),
    (20, -20, 5), (30, -20, 18), (40, -20, 15), (25, -25, 3), (35, -25, 6), (30, -30, 1),
]


def _drawn_to_pq(x, y):
    s = (30 - y) // 5
    d = (x - 30) // 5
    return (s - d) // 2, (s + d) // 2


def test_iwasawa6_hodge_diamond():
    t0 = time.perf_counter()
    h = dolbeault(builtin("iwasawa6"))
    assert time.perf_counter() - t0 < 120
    expect = {_drawn_to_pq(x, y): v for x, y, v in I6_DRAWN}
    assert len(expect) == 49
    assert h.entries == expect
    assert (h[(3, 3)], h[(2, 2)], h[(1, 0)], h[(0, 1)], h[(5, 0)], h[(6, 1)]) == (120, 75, 6, 3, 6, 3)


def test_iwasawa3_hodge_numbers():
    h = dolbeault(builtin("iwasawa3"))
    h0q = [1, 2, 2, 1]
    for p in range(4):
        for q in range(4):
            assert h[(p, q)] == comb(3, p) * h0q[q]


def _oracle_total_cohomology(model):
    """KB homology from dense ranks of the assembled total differential."""
    dc = kb_double_complex(model)
    out = {}
    for k in dc.total_degrees():
        n = dc.total_dim(k)
        if not n:
            continue
        r_out = complex_rank(dc.total_matrix(k).to_dense()) if dc.total_dim(k + 1) else 0
        r_in = complex_rank(dc.total_matrix(k - 1).to_dense()) if dc.total_dim(k - 1) else 0
        out[k] = n - r_out - r_in
    return out


@pytest.mark.parametrize("case", corpus.SMALL, ids=corpus.ids(corpus.SMALL))
def test_kb_against_dense_oracle(case):
    m = corpus.get(*case)
    kb = kb_homology(m).entries
    oracle = _oracle_total_cohomology(m)
    assert {k: v for k, v in kb.items() if v} == {k: v for k, v in oracle.items() if v}


@pytest.mark.parametrize("case", corpus.CASES, ids=corpus.ids(corpus.CASES))
def test_kb_symmetry_and_spectral_sequence(case):
    m = corpus.get(*case)
    n = m.n
    kb = kb_homology(m)
    for k in range(2 * n + 1):
        assert kb[k] == kb[2 * n - k]
    h = dolbeault(m)
    e1 = ss_page(m, 1)
    assert e1.entries == {(n - p, q): v for (p, q), v in h.entries.items()} | {
        c: 0 for c in e1.entries if e1.entries[c] == 0}
    einf = ss_e_infinity(m)
    assert {k: v for k, v in dims_by_total(einf.entries).items() if v} == {k: v for k, v in kb.entries.items() if v}
    assert euler_characteristic(e1.entries) == euler_characteristic(einf.entries)
    e0 = ss_page(m, 0)
    assert all(e0[c] >= e1[c] >= einf[c] for c in e0.entries)


def test_iwasawa6_pi2_pages():
    m = builtin("iwasawa6", "pi2")
    t0 = time.perf_counter()
    kb = kb_homology(m)
    assert (kb[0], kb[1]) == (1, 8)
    assert dims_by_total(ss_page(m, 1).entries)[1] == 9
    assert dims_by_total(ss_page(m, 2).entries)[1] == 8
    assert time.perf_counter() - t0 < 120


def test_invalid_page():
    with pytest.raises(InvalidPage):
        ss_page(builtin("torus_1"), -1)


def test_iwasawa3_delpi_vanishes_and_tables():
    m = builtin("iwasawa3")
    assert all(matrix(Op.DELPI, m, p, q).is_zero() for p, q in m.bidegrees())
    assert delpi_cohomology(m).entries == {bd: m.dim(*bd) for bd in m.bidegrees()}
    assert kb_homology(m).entries == {0: 1, 1: 5, 2: 11, 3: 14, 4: 11, 5: 5, 6: 1}


@pytest.mark.parametrize("name,poisson", [("iwasawa3", "default"), ("torus_2", "std")])
def test_bc_aeppli_when_delpi_vanishes(name, poisson):
    # with ∂_π = 0: BC = ker ∂̄ and Aeppli = A / im ∂̄
    m = builtin(name, poisson)
    bc, ae = bott_chern(m), aeppli(m)
    for p, q in m.bidegrees():
        dim = m.dim(p, q)
        r_out = rank(matrix(Op.DBAR, m, p, q)) if m.dim(p, q + 1) else 0
        r_in = rank(matrix(Op.DBAR, m, p, q - 1)) if q > 0 and m.dim(p, q - 1) else 0
        assert bc[(p, q)] == dim - r_out
        assert ae[(p, q)] == dim - r_in


def test_lp_on_flat_torus():
    m = builtin("torus_2", "zero")
    lp = lp_cohomology(m)
    for k in range(5):
        assert lp[k] == sum(comb(2, s) * comb(2, k - s) for s in range(3) if 0 <= k - s <= 2)


@pytest.mark.parametrize("name", ["nakamura_case1", "nakamura_case2", "iwasawa6"])
def test_pi23_like_structures_give_degenerate_kb(name):
    m = builtin(name, "pi23" if name.startswith("nakamura") else "pi1")
    assert kb_homology(m).entries == kb_from_hodge(HodgeDiamond.from_table(dolbeault(m))).entries


def test_representatives_count():
    m = builtin("iwasawa3")
    for table in (dolbeault(m, basis=True), kb_homology(m, basis=True), bott_chern(m, basis=True)):
        for idx, dim in table.entries.items():
            assert len(table.representatives[idx]) == dim


def test_table_round_trips():
    t = kb_homology(builtin("nakamura_case1", "pi12"), basis=True)
    assert parse_table(t.format()) == t
    assert CohomologyTable.from_dict(json.loads(json.dumps(t.to_dict()))) == t
    d = dolbeault(builtin("iwasawa3"))
    assert parse_table(d.format()) == d


# ---------------------------------------------------------------------------
# formula mode

@pytest.mark.parametrize("n", range(0, 6))
def test_delta_diamond(n):
    kb = kb_from_hodge(HodgeDiamond.delta(n))
    assert kb.entries == {k: (n + 1 if k == n else 0) for k in range(2 * n + 1)}


@pytest.mark.parametrize("m,n", [(0, 1), (1, 1), (1, 2), (2, 3), (3, 3)])
def test_kunneth_of_delta_diamonds(m, n):
    prod = kunneth(HodgeDiamond.delta(m), HodgeDiamond.delta(n))
    kb = kb_from_hodge(prod)
    assert kb[m + n] == (m + 1) * (n + 1)
    assert sum(kb.entries.values()) == (m + 1) * (n + 1)


def test_diamond_input_forms():
    a = HodgeDiamond.from_dict({"n": 1, "rows": [[1, 1], [1, 1]]})
    b = HodgeDiamond.from_dict({"n": 1, "h": [[0, 0, 1], [0, 1, 1], [1, 0, 1], [1, 1, 1]]})
    assert a == b
    assert HodgeDiamond.from_dict(a.to_dict()) == a
    with pytest.raises(ValueError):
        HodgeDiamond(1, {(0, 0): -1})
