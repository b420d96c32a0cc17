"""Decision procedures with certificates: ∂∂̄- and ∂_π∂̄-lemmas, E_1-degeneration,
the Bott–Chern/Aeppli equality criterion, unimodularity and the formality diagram.

All verdicts are model-level: they concern the finite model, not a manifold.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

from .cohomology import (
    Unsupported,
    aeppli,
    bott_chern,
    delpi_cohomology,
    derham_double_complex,
    dolbeault,
    kb_double_complex,
    kb_homology,
    lp_cohomology,
    ss_e_infinity,
    ss_page,
)
from .complexes import DoubleComplex, shift
from .exactfield import (
    NoSolution,
    SparseMatrix,
    SubspaceBasis,
    image_basis,
    intersect,
    kernel_basis,
    solve,
    subspace_sum,
)
from .model.core import FormExpr, Model, Monomial
from .operators import Op, apply, form_of

Cell = Tuple[int, int]


class InternalInconsistency(RuntimeError):
    """Two characterisations of the same property disagree; indicates a bug."""


class LemmaUnavailable(ValueError):
    pass


@dataclass
class Witness:
    element: FormExpr
    preimage: Optional[FormExpr]
    bidegree: Tuple[int, int]
    tag: str

    def to_dict(self):
        return {
            "element": str(self.element),
            "preimage": None if self.preimage is None else str(self.preimage),
            "bidegree": list(self.bidegree),
            "certificate": self.tag,
        }


@dataclass
class LemmaVerdict:
    name: str
    holds: bool
    witness: Optional[Witness] = None
    breakdown: Dict[Tuple[int, int], Tuple[int, int]] = field(default_factory=dict)
    details: Dict[str, object] = field(default_factory=dict)

    def failing(self) -> List[Tuple[int, int]]:
        return sorted(bd for bd, (l, r) in self.breakdown.items() if l != r)

    def to_dict(self):
        return {
            "lemma": self.name,
            "holds": self.holds,
            "witness": None if self.witness is None else self.witness.to_dict(),
            "breakdown": [
                {"p": p, "q": q, "left": l, "right": r} for (p, q), (l, r) in sorted(self.breakdown.items())
            ],
            "details": self.details,
        }


# ---------------------------------------------------------------------------
# the lemma on a double complex

@dataclass
class _LemmaSetup:
    name: str
    dc: DoubleComplex
    to_bidegree: Callable[[Cell], Tuple[int, int]]
    to_cell: Callable[[int, int], Cell]
    horizontal: Op
    prefer_mixed: bool


def _setup(model: Model, which: str) -> _LemmaSetup:
    n = model.n
    if which == "ddbar":
        return _LemmaSetup("ddbar", derham_double_complex(model), lambda c: c, lambda p, q: (p, q), Op.DEL, True)
    return _LemmaSetup("dpidbar", kb_double_complex(model), lambda c: (n - c[0], c[1]),
                       lambda p, q: (n - p, q), Op.DELPI, False)


def _left_right(s: _LemmaSetup, cell: Cell) -> Tuple[SubspaceBasis, SubspaceBasis]:
    return s.dc.pure_image(cell), s.dc.image_hv_into_cell(cell)


def _total_vector_to_form(model: Model, s: _LemmaSetup, k: int, v) -> FormExpr:
    terms = {}
    for cell, off in s.dc.offsets(k).items():
        basis = model.basis(*s.to_bidegree(cell))
        for i, c in v.items():
            if off <= i < off + s.dc.dim(*cell):
                terms[basis[i - off]] = c
    return FormExpr._wrap(model, terms)


def _witness_in_cell(model: Model, s: _LemmaSetup, cell: Cell, left: SubspaceBasis, right: SubspaceBasis) -> Witness:
    a, b = cell
    k = a + b
    bd = s.to_bidegree(cell)
    D = s.dc.total_matrix(k - 1)
    lo = s.dc.offsets(k)[cell]
    hi = lo + s.dc.dim(a, b)
    tag = f"element of ker∩ker∩im at {bd} outside im of the composite"
    # scan preimage monomials in canonical order
    candidates = []
    for c2, off in s.dc.offsets(k - 1).items():
        for i, m in enumerate(model.basis(*s.to_bidegree(c2))):
            candidates.append((model.sort_key(m), off + i))
    candidates.sort()
    cols = D.column_vectors()
    for _, j in candidates:
        img = cols[j]
        if not img or any(not lo <= i < hi for i in img):
            continue
        local = shift(img, -lo)
        if right.contains(local):
            continue
        x = _total_vector_to_form(model, s, k - 1, {j: 1})
        y = form_of(model, local, *bd)
        return Witness(y, x, bd, tag)
    for v in left.vectors:
        if not right.contains(v):
            full = shift(v, lo)
            pre = solve(D, full)
            return Witness(form_of(model, v, *bd), _total_vector_to_form(model, s, k - 1, pre), bd, tag)
    raise InternalInconsistency("left set larger than right set but no vector outside it")


def _cell_order(s: _LemmaSetup, cells: List[Cell]) -> List[Cell]:
    def key(c):
        p, q = s.to_bidegree(c)
        mixed = 0 if (not s.prefer_mixed or (p >= 1 and q >= 1)) else 1
        return (mixed, p + q, p, q)
    return sorted(cells, key=key)


def _condition1(model: Model, s: _LemmaSetup) -> LemmaVerdict:
    breakdown = {}
    failing = []
    cache = {}
    for cell in sorted(s.dc.dims):
        if not s.dc.dim(*cell):
            continue
        left, right = _left_right(s, cell)
        cache[cell] = (left, right)
        breakdown[s.to_bidegree(cell)] = (left.dim, right.dim)
        if left.dim != right.dim:
            failing.append(cell)
    verdict = LemmaVerdict(s.name, not failing, breakdown=breakdown)
    if failing:
        first = _cell_order(s, failing)[0]
        verdict.witness = _witness_in_cell(model, s, first, *cache[first])
    return verdict


def _conditions_2_3(s: _LemmaSetup) -> Tuple[bool, bool]:
    dc = s.dc
    cond2 = True
    cond3 = True
    for cell in sorted(dc.dims):
        if not dc.dim(*cell):
            continue
        hv = dc.image_hv_into_cell(cell)
        im_h = dc.image_into_cell(cell, "h")
        im_v = dc.image_into_cell(cell, "v")
        ker_h = dc.kernel_in_cell(cell, "h")
        ker_v = dc.kernel_in_cell(cell, "v")
        if intersect(ker_v, im_h).dim != hv.dim or intersect(ker_h, im_v).dim != hv.dim:
            cond2 = False
        if intersect(intersect(ker_v, ker_h), subspace_sum(im_h, im_v)).dim != hv.dim:
            cond3 = False
    return cond2, cond3


def check_deldbar(model: Model) -> LemmaVerdict:
    """``ker ∂ ∩ ker ∂̄ ∩ im d = im ∂∂̄`` per bidegree."""
    return _condition1(model, _setup(model, "ddbar"))


def check_dpidbar(model: Model) -> LemmaVerdict:
    """``ker ∂_π ∩ ker ∂̄ ∩ im(∂_π + ∂̄) = im ∂_π∂̄``, cross-checked by the two equivalent forms."""
    s = _setup(model, "dpidbar")
    verdict = _condition1(model, s)
    c2, c3 = _conditions_2_3(s)
    verdict.details["condition_2"] = c2
    verdict.details["condition_3"] = c3
    if not (verdict.holds == c2 == c3):
        raise InternalInconsistency(f"∂_π∂̄-lemma forms disagree: (1)={verdict.holds} (2)={c2} (3)={c3}")
    return verdict


def certify_witness(model: Model, verdict: LemmaVerdict) -> bool:
    """Re-check a failing verdict's witness from scratch with the operators."""
    w = verdict.witness
    if w is None:
        return False
    h_op = Op.DEL if verdict.name == "ddbar" else Op.DELPI
    y = w.element
    if not y.terms or y.bidegree != w.bidegree:
        return False
    if apply(h_op, y).terms or apply(Op.DBAR, y).terms:
        return False
    if w.preimage is not None:
        x = w.preimage
        dx = apply(h_op, x) + apply(Op.DBAR, x)
        if dx != y:
            return False
    else:
        return False
    p, q = w.bidegree
    # right set: h ∘ ∂̄ applied to bidegree (p', q-1) landing on (p, q)
    src_p = p - 1 if h_op is Op.DEL else p + 1
    src = model.basis(src_p, q - 1)
    if src:
        cols = []
        idx = model.index(p, q)
        for m in src:
            img = apply(h_op, apply(Op.DBAR, model.monomial_form(m)))
            cols.append({idx[mm]: c for mm, c in img.terms.items()})
        mat = SparseMatrix.from_columns(len(idx), cols)
        rhs = {idx[m]: c for m, c in y.terms.items()}
        try:
            solve(mat, rhs)
            return False
        except NoSolution:
            pass
    return True


# ---------------------------------------------------------------------------
# degeneration and the Bott–Chern/Aeppli criterion

def hodge_sum(model: Model, h=None) -> Dict[int, int]:
    """``Σ_{p-q=n-k} h^{p,q}`` for every KB degree ``k``."""
    h = h or dolbeault(model)
    n = model.n
    out: Dict[int, int] = {}
    for (p, q), v in h.entries.items():
        k = n - p + q
        out[k] = out.get(k, 0) + v
    return out


@dataclass
class DegeneracyVerdict:
    degenerate: bool
    hodge_sums: Dict[int, int]
    kb_dims: Dict[int, int]
    failing: List[int]
    page_test: bool

    def to_dict(self):
        return {
            "degenerate": self.degenerate,
            "failing": [{"k": k, "hodge_sum": self.hodge_sums.get(k, 0), "kb": self.kb_dims.get(k, 0)} for k in self.failing],
            "hodge_sums": {str(k): v for k, v in sorted(self.hodge_sums.items())},
            "kb": {str(k): v for k, v in sorted(self.kb_dims.items())},
            "page_test": self.page_test,
        }


def check_degeneracy(model: Model) -> DegeneracyVerdict:
    """E_1-degeneration by dimension count, cross-checked against ``E_1 = E_∞``."""
    sums = hodge_sum(model)
    kb = kb_homology(model).entries
    failing = [k for k in sorted(set(sums) | set(kb)) if sums.get(k, 0) != kb.get(k, 0)]
    page_test = ss_page(model, 1).entries == ss_e_infinity(model).entries
    if page_test != (not failing):
        raise InternalInconsistency(f"degeneration tests disagree: count={not failing} pages={page_test}")
    return DegeneracyVerdict(not failing, sums, dict(kb), failing, page_test)


@dataclass
class BCAeppliVerdict:
    equality: bool
    sums: Dict[int, int]
    kb_dims: Dict[int, int]
    inequality_holds: bool

    def to_dict(self):
        return {
            "equality": self.equality,
            "inequality_holds": self.inequality_holds,
            "rows": [{"k": k, "bc_plus_aeppli": self.sums.get(k, 0), "twice_kb": 2 * self.kb_dims.get(k, 0)}
                     for k in sorted(self.kb_dims)],
        }


def bc_aeppli_sums(model: Model) -> Dict[int, int]:
    """``Σ (dim BC + dim A)`` over bidegrees of KB degree ``k = n - p + q``."""
    bc, ae = bott_chern(model), aeppli(model)
    out: Dict[int, int] = {}
    for (p, q) in model.bidegrees():
        k = model.n - p + q
        out[k] = out.get(k, 0) + bc[(p, q)] + ae[(p, q)]
    return out


def check_bc_aeppli_equality(model: Model, cross_check: bool = True) -> BCAeppliVerdict:
    sums = bc_aeppli_sums(model)
    kb = kb_homology(model).entries
    ks = sorted(set(sums) | set(kb))
    ineq = all(sums.get(k, 0) >= 2 * kb.get(k, 0) for k in ks)
    eq = all(sums.get(k, 0) == 2 * kb.get(k, 0) for k in ks)
    if cross_check:
        lemma = check_dpidbar(model).holds
        if lemma != eq:
            raise InternalInconsistency(f"BC/Aeppli equality {eq} but ∂_π∂̄-lemma {lemma}")
    return BCAeppliVerdict(eq, sums, dict(kb), ineq)


# ---------------------------------------------------------------------------
# unimodularity and duality

@dataclass
class UnimodularVerdict:
    unimodular: bool
    delpi_omega: str
    duality: Optional[Dict[int, Tuple[int, int]]] = None
    duality_holds: Optional[bool] = None

    def to_dict(self):
        out = {"unimodular": self.unimodular, "delpi_omega": self.delpi_omega}
        if self.duality is not None:
            out["duality_holds"] = self.duality_holds
            out["duality"] = [{"k": k, "kb": a, "lp_2n_minus_k": b} for k, (a, b) in sorted(self.duality.items())]
        return out


def volume_form(model: Model) -> FormExpr:
    """``w_1 ∧ … ∧ w_n`` (tensored with the unit coefficient for tensor models)."""
    if model.kind == "tensor" and model.metadata.get("volume") != "holo":
        raise Unsupported("tensor model declares no volume element; add 'volume = holo' to [model]")
    return model.monomial_form(Monomial(tuple(range(model.n)), model.unit().anti))


def check_unimodular(model: Model) -> UnimodularVerdict:
    """Unimodular iff ``∂_π ω = 0``; then ``dim H_k = dim H^{2n-k}`` is asserted."""
    dw = apply(Op.DELPI, volume_form(model))
    verdict = UnimodularVerdict(not dw.terms, str(dw))
    if verdict.unimodular:
        kb = kb_homology(model).entries
        lp = lp_cohomology(model).entries
        top = 2 * model.n
        dual = {k: (kb.get(k, 0), lp.get(top - k, 0)) for k in sorted(kb)}
        verdict.duality = dual
        verdict.duality_holds = all(a == b for a, b in dual.values())
    return verdict


# ---------------------------------------------------------------------------
# formality diagram

@dataclass
class MapReport:
    name: str
    source: str
    target: str
    well_defined: bool
    ranks: Dict[object, Tuple[int, int, int]]  # index -> (rank, dim source, dim target)

    @property
    def quasi_isomorphism(self) -> bool:
        return self.well_defined and all(r == s == t for r, s, t in self.ranks.values())

    def to_dict(self):
        return {
            "map": self.name,
            "source": self.source,
            "target": self.target,
            "well_defined": self.well_defined,
            "isomorphism": self.quasi_isomorphism,
            "ranks": [
                {"index": list(i) if isinstance(i, tuple) else i, "rank": r, "source": s, "target": t}
                for i, (r, s, t) in sorted(self.ranks.items(), key=lambda kv: kv[0] if isinstance(kv[0], tuple) else (kv[0],))
            ],
        }


def _dim_sum(*spaces: SubspaceBasis) -> int:
    return subspace_sum(*spaces).dim


def formality_diagram(model: Model) -> Dict[str, object]:
    """Ranks of ``i_1, p_1, i_2, p_2`` and of the Bott–Chern/Aeppli comparison maps."""
    dc = kb_double_complex(model)
    maps: Dict[str, Dict[object, Tuple[int, int, int]]] = {k: {} for k in ("i1", "p1", "i2", "p2")}
    wd = {"i1": True, "i2": True, "p1": True, "p2": True}
    morph = {k: {} for k in ("BC->DelPi", "BC->Dolbeault", "BC->KB", "DelPi->Aeppli", "Dolbeault->Aeppli", "KB->Aeppli")}
    nodes = {k: {} for k in ("A_dbar", "ker_delpi_dbar", "H_delpi", "ker_dbar_delpi", "H_dbar")}
    for p, q in model.bidegrees():
        cell = (model.n - p, q)
        dim = dc.dim(*cell)
        if not dim:
            continue
        a, b = cell
        ker_h = dc.kernel_in_cell(cell, "h")
        ker_v = dc.kernel_in_cell(cell, "v")
        im_h = dc.image_into_cell(cell, "h")
        im_v = dc.image_into_cell(cell, "v")
        both = intersect(ker_h, ker_v)
        # ∂̄ restricted to ker ∂_π arriving here, and ∂_π restricted to ker ∂̄
        if dc.dim(a, b - 1):
            src = dc.kernel_in_cell((a, b - 1), "h")
            v_prev = dc.v(a, b - 1)
            im_v_on_kerh = SubspaceBasis(dim, [v_prev.apply(x) for x in src.vectors])
            # p_1 needs ∂̄(ker ∂_π) ⊆ im ∂_π one step up
        else:
            im_v_on_kerh = SubspaceBasis(dim)
        if dc.dim(a - 1, b):
            src = dc.kernel_in_cell((a - 1, b), "v")
            h_prev = dc.h(a - 1, b)
            im_h_on_kerv = SubspaceBasis(dim, [h_prev.apply(x) for x in src.vectors])
        else:
            im_h_on_kerv = SubspaceBasis(dim)
        if dc.dim(a, b + 1):
            tgt_im_h = dc.image_into_cell((a, b + 1), "h")
            v_here = dc.v(a, b)
            if not all(tgt_im_h.contains(v_here.apply(x)) for x in ker_h.vectors):
                wd["p1"] = False
        if dc.dim(a + 1, b):
            tgt_im_v = dc.image_into_cell((a + 1, b), "v")
            h_here = dc.h(a, b)
            if not all(tgt_im_v.contains(h_here.apply(x)) for x in ker_v.vectors):
                wd["p2"] = False
        h_kerh = both.dim - im_v_on_kerh.dim       # H(ker ∂_π, ∂̄)
        h_kerv = both.dim - im_h_on_kerv.dim       # H(ker ∂̄, ∂_π)
        h_dbar = ker_v.dim - im_v.dim
        h_delpi = ker_h.dim - im_h.dim
        idx = (p, q)
        nodes["A_dbar"][idx] = h_dbar
        nodes["ker_delpi_dbar"][idx] = h_kerh
        nodes["H_delpi"][idx] = h_delpi
        nodes["ker_dbar_delpi"][idx] = h_kerv
        nodes["H_dbar"][idx] = h_dbar
        maps["i1"][idx] = (_dim_sum(both, im_v) - im_v.dim, h_kerh, h_dbar)
        maps["p1"][idx] = (_dim_sum(both, im_h) - im_h.dim, h_kerh, h_delpi)
        maps["i2"][idx] = (_dim_sum(both, im_h) - im_h.dim, h_kerv, h_delpi)
        maps["p2"][idx] = (_dim_sum(both, im_v) - im_v.dim, h_kerv, h_dbar)
        bc_den = dc.image_hv_into_cell(cell)
        bc = both.dim - bc_den.dim
        sum_im = subspace_sum(im_h, im_v)
        ae = dc.hv_kernel(cell).dim - sum_im.dim
        morph["BC->DelPi"][idx] = (_dim_sum(both, im_h) - im_h.dim, bc, h_delpi)
        morph["BC->Dolbeault"][idx] = (_dim_sum(both, im_v) - im_v.dim, bc, h_dbar)
        morph["DelPi->Aeppli"][idx] = (_dim_sum(ker_h, sum_im) - sum_im.dim, h_delpi, ae)
        morph["Dolbeault->Aeppli"][idx] = (_dim_sum(ker_v, sum_im) - sum_im.dim, h_dbar, ae)
    # maps through KB homology, per total degree
    bc_t, ae_t = bott_chern(model), aeppli(model)
    kb = kb_homology(model).entries
    for k in dc.total_degrees():
        n_k = dc.total_dim(k)
        if not n_k:
            continue
        offs = dc.offsets(k)
        both_total, sum_total = [], []
        for cell, off in offs.items():
            ker_h = dc.kernel_in_cell(cell, "h")
            ker_v = dc.kernel_in_cell(cell, "v")
            both_total += [shift(v, off) for v in intersect(ker_h, ker_v).vectors]
            sum_total += [shift(v, off) for v in subspace_sum(dc.image_into_cell(cell, "h"), dc.image_into_cell(cell, "v")).vectors]
        both_s = SubspaceBasis(n_k, both_total)
        sum_s = SubspaceBasis(n_k, sum_total)
        imD = dc.total_image(k)
        kerD = dc.total_kernel(k)
        bc_k = sum(bc_t[(model.n - c[0], c[1])] for c in offs)
        ae_k = sum(ae_t[(model.n - c[0], c[1])] for c in offs)
        morph["BC->KB"][k] = (_dim_sum(both_s, imD) - imD.dim, bc_k, kb.get(k, 0))
        morph["KB->Aeppli"][k] = (_dim_sum(kerD, sum_s) - sum_s.dim, kb.get(k, 0), ae_k)
    # a map that is not a chain map has no induced rank
    diagram = [
        MapReport(name, src, tgt, wd[name], maps[name] if wd[name] else {})
        for name, src, tgt in (
            ("i1", "(ker ∂π, ∂̄)", "(A, ∂̄)"),
            ("p1", "(ker ∂π, ∂̄)", "(H_∂π, 0)"),
            ("i2", "(ker ∂̄, ∂π)", "(A, ∂π)"),
            ("p2", "(ker ∂̄, ∂π)", "(H_∂̄, 0)"),
        )
    ]
    morphisms = [MapReport(name, *name.split("->"), True, ranks) for name, ranks in morph.items()]
    return {
        "nodes": nodes,
        "maps": diagram,
        "morphisms": morphisms,
        "all_quasi_isomorphisms": all(m.quasi_isomorphism for m in diagram),
        "all_morphisms_isomorphisms": all(m.quasi_isomorphism for m in morphisms),
    }
