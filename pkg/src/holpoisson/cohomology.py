"""Cohomology tables of a model: Dolbeault, ∂_π, Koszul–Brylinski, spectral
sequence pages, Bott–Chern, Aeppli and Lichnerowicz–Poisson, plus formula
mode on bare Hodge diamonds."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

from .complexes import DoubleComplex, InvalidPage, dims_by_total
from .exactfield import SparseMatrix, SubspaceBasis, image_basis, kernel_basis, rank, subspace_sum
from .model.core import FormExpr, Model, PolyvectorExpr, TensorModel
from .operators import Op, form_of, matrix

Index = Union[int, Tuple[int, int]]


class Unsupported(ValueError):
    pass


@dataclass
class CohomologyTable:
    """Dimensions indexed by bidegree ``(p, q)``, ``(s, t)`` or total degree ``k``."""

    kind: str
    entries: Dict[Index, int]
    representatives: Optional[Dict[Index, List[str]]] = None
    n: Optional[int] = None
    index_names: Tuple[str, ...] = ("p", "q")

    def __getitem__(self, idx: Index) -> int:
        return self.entries.get(idx, 0)

    def total(self) -> int:
        return sum(self.entries.values())

    def by_total_degree(self) -> Dict[int, int]:
        out: Dict[int, int] = {}
        for idx, d in self.entries.items():
            k = idx if isinstance(idx, int) else sum(idx)
            out[k] = out.get(k, 0) + d
        return out

    def to_dict(self) -> Dict[str, object]:
        rows = []
        for idx in sorted(self.entries, key=lambda x: (x,) if isinstance(x, int) else x):
            row: Dict[str, object] = {}
            if isinstance(idx, int):
                row[self.index_names[0]] = idx
            else:
                for name, v in zip(self.index_names, idx):
                    row[name] = v
            row["dim"] = self.entries[idx]
            if self.representatives is not None:
                row["basis"] = self.representatives.get(idx, [])
            rows.append(row)
        return {"kind": self.kind, "n": self.n, "index": list(self.index_names), "entries": rows}

    @classmethod
    def from_dict(cls, data: Dict[str, object]) -> "CohomologyTable":
        names = tuple(data["index"])
        entries: Dict[Index, int] = {}
        reps: Optional[Dict[Index, List[str]]] = None
        for row in data["entries"]:
            idx = row[names[0]] if len(names) == 1 else tuple(row[nm] for nm in names)
            entries[idx] = row["dim"]
            if "basis" in row:
                reps = reps or {}
                reps[idx] = list(row["basis"])
        return cls(data["kind"], entries, reps, data.get("n"), names)

    def format(self) -> str:
        """Human-readable table; ``parse_table`` inverts it."""
        lines = [f"# {self.kind}" + (f" n={self.n}" if self.n is not None else "")]
        lines.append("  ".join(self.index_names) + "  dim")
        for idx in sorted(self.entries, key=lambda x: (x,) if isinstance(x, int) else x):
            cells = [str(idx)] if isinstance(idx, int) else [str(v) for v in idx]
            lines.append("  ".join(cells) + f"  {self.entries[idx]}")
            if self.representatives is not None:
                for rep in self.representatives.get(idx, []):
                    lines.append(f"    {rep}")
        return "\n".join(lines) + "\n"


def parse_table(text: str) -> CohomologyTable:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    head = lines[0][2:].split()
    kind = head[0]
    n = int(head[1][2:]) if len(head) > 1 else None
    names = tuple(lines[1].split()[:-1])
    entries: Dict[Index, int] = {}
    reps: Optional[Dict[Index, List[str]]] = None
    last: Optional[Index] = None
    for ln in lines[2:]:
        if ln.startswith("    "):
            reps = reps or {}
            reps.setdefault(last, []).append(ln.strip())
            continue
        parts = [int(x) for x in ln.split()]
        idx: Index = parts[0] if len(names) == 1 else tuple(parts[:-1])
        entries[idx] = parts[-1]
        last = idx
    if reps is not None:
        for idx in entries:
            reps.setdefault(idx, [])
    return CohomologyTable(kind, entries, reps, n, names)


# ---------------------------------------------------------------------------
# helpers

def _quotient_representatives(model: Model, num: SubspaceBasis, den: SubspaceBasis, p: int, q: int,
                              polyvector: bool = False) -> List[str]:
    """Basis vectors of ``num`` independent modulo ``den``, as expressions."""
    acc = SubspaceBasis(num.ambient_dim, den.vectors)
    out = []
    for v in num.vectors:
        if not acc.contains(v):
            acc = subspace_sum(acc, SubspaceBasis(num.ambient_dim, [v]))
            out.append(str(form_of(model, v, p, q, polyvector)))
    return out


def _op_matrix(model: Model, op: Op, p: int, q: int, polyvector: bool = False) -> SparseMatrix:
    from .operators import SHIFT

    dp, dq = SHIFT[op]
    if model.dim(p, q) == 0:
        return SparseMatrix(model.dim(p + dp, q + dq), 0)
    return matrix(op, model, p, q, polyvector=polyvector)


def _column_cohomology(model: Model, kind: str, op: Op, basis: bool, polyvector: bool = False) -> CohomologyTable:
    from .operators import SHIFT

    dp, dq = SHIFT[op]
    entries: Dict[Index, int] = {}
    reps: Optional[Dict[Index, List[str]]] = {} if basis else None
    for p, q in model.bidegrees():
        dim = model.dim(p, q)
        out_m = _op_matrix(model, op, p, q, polyvector)
        in_m = _op_matrix(model, op, p - dp, q - dq, polyvector)
        if basis:
            ker = kernel_basis(out_m)
            im = image_basis(in_m) if in_m.cols else SubspaceBasis(dim)
            entries[(p, q)] = ker.dim - im.dim
            reps[(p, q)] = _quotient_representatives(model, ker, im, p, q, polyvector)
        else:
            entries[(p, q)] = dim - rank(out_m) - rank(in_m)
    return CohomologyTable(kind, entries, reps, model.n)


# ---------------------------------------------------------------------------
# double complexes attached to a model

def kb_double_complex(model: Model) -> DoubleComplex:
    """Cells ``(a, b) = (n - p, q)`` with horizontal ∂_π and vertical ∂̄."""
    key = ("dc", "kb")
    hit = model._cache.get(key)
    if hit is None:
        n = model.n
        dims = {(n - p, q): model.dim(p, q) for p, q in model.bidegrees()}
        hit = DoubleComplex(
            dims,
            lambda a, b: _op_matrix(model, Op.DELPI, n - a, b),
            lambda a, b: _op_matrix(model, Op.DBAR, n - a, b),
        )
        model._cache[key] = hit
    return hit


def derham_double_complex(model: Model) -> DoubleComplex:
    """Cells ``(p, q)`` with horizontal ∂ and vertical ∂̄."""
    key = ("dc", "derham")
    hit = model._cache.get(key)
    if hit is None:
        dims = {(p, q): model.dim(p, q) for p, q in model.bidegrees()}
        hit = DoubleComplex(
            dims,
            lambda p, q: _op_matrix(model, Op.DEL, p, q),
            lambda p, q: _op_matrix(model, Op.DBAR, p, q),
        )
        model._cache[key] = hit
    return hit


def lp_double_complex(model: Model) -> DoubleComplex:
    """Polyvector cells ``(s, q)`` with horizontal b_π and vertical ∂̄."""
    key = ("dc", "lp")
    hit = model._cache.get(key)
    if hit is None:
        dims = {(p, q): model.dim(p, q) for p, q in model.bidegrees()}
        hit = DoubleComplex(
            dims,
            lambda s, q: _op_matrix(model, Op.BPI, s, q, True),
            lambda s, q: _op_matrix(model, Op.DBAR, s, q, True),
        )
        model._cache[key] = hit
    return hit


def kb_cell(model: Model, p: int, q: int) -> Tuple[int, int]:
    return model.n - p, q


# ---------------------------------------------------------------------------
# tables

def dolbeault(model: Model, basis: bool = False) -> CohomologyTable:
    """``h^{p,q} = dim ker ∂̄|_{(p,q)} - rank ∂̄|_{(p,q-1)}``."""
    return _column_cohomology(model, "Dolbeault", Op.DBAR, basis)


def delpi_cohomology(model: Model, basis: bool = False) -> CohomologyTable:
    """∂_π-cohomology along rows of fixed ``q``."""
    return _column_cohomology(model, "DelPi", Op.DELPI, basis)


def del_cohomology(model: Model, basis: bool = False) -> CohomologyTable:
    return _column_cohomology(model, "Del", Op.DEL, basis)


def _total_table(dc: DoubleComplex, kind: str, n: int, degrees: List[int], model: Optional[Model] = None,
                 basis: bool = False, cell_to_bidegree=None, polyvector: bool = False) -> CohomologyTable:
    entries: Dict[Index, int] = {}
    reps: Optional[Dict[Index, List[str]]] = {} if basis else None
    for k in degrees:
        if basis:
            ker = dc.total_kernel(k)
            im = dc.total_image(k)
            entries[k] = ker.dim - im.dim
            reps[k] = _total_representatives(dc, model, k, ker, im, cell_to_bidegree, polyvector)
        else:
            entries[k] = dc.total_cohomology_dim(k)
    return CohomologyTable(kind, entries, reps, n, ("k",))


def _total_representatives(dc, model, k, ker, im, cell_to_bidegree, polyvector) -> List[str]:
    acc = SubspaceBasis(ker.ambient_dim, im.vectors)
    out = []
    cls = PolyvectorExpr if polyvector else FormExpr
    for v in ker.vectors:
        if acc.contains(v):
            continue
        acc = subspace_sum(acc, SubspaceBasis(ker.ambient_dim, [v]))
        terms = {}
        for cell, off in dc.offsets(k).items():
            p, q = cell_to_bidegree(cell)
            basis = model.basis(p, q)
            for i, c in v.items():
                if off <= i < off + dc.dim(*cell):
                    terms[basis[i - off]] = c
        out.append(str(cls._wrap(model, terms)))
    return out


def kb_homology(model: Model, basis: bool = False) -> CohomologyTable:
    """``H_k`` of the total complex of ``(Λ^{•,•}, ∂_π, ∂̄)``, ``k = n - p + q``."""
    dc = kb_double_complex(model)
    n = model.n
    degrees = list(range(0, n + model.anti_range() + 1))
    return _total_table(dc, "KB", n, degrees, model, basis, lambda c: (n - c[0], c[1]))


def derham_cohomology(model: Model) -> CohomologyTable:
    dc = derham_double_complex(model)
    return _total_table(dc, "deRham", model.n, list(range(0, model.n + model.anti_range() + 1)))


def ss_page(model: Model, r: int) -> CohomologyTable:
    """``E_r^{s,t}`` of the column filtration; ``E_1^{s,t} = h^{n-s,t}``."""
    if r < 0:
        raise InvalidPage(f"page index must be non-negative, got {r}")
    dc = kb_double_complex(model)
    return CohomologyTable(f"E{r}", dc.page(r), None, model.n, ("s", "t"))


def ss_e_infinity(model: Model) -> CohomologyTable:
    dc = kb_double_complex(model)
    return CohomologyTable("Einf", dc.e_infinity(), None, model.n, ("s", "t"))


def _bc_aeppli(dc: DoubleComplex, cell, kind: str) -> Tuple[SubspaceBasis, SubspaceBasis]:
    if kind == "BC":
        num = dc.both_kernel(cell)
        den = dc.image_hv_into_cell(cell)
    else:
        num = dc.hv_kernel(cell)
        den = subspace_sum(dc.image_into_cell(cell, "h"), dc.image_into_cell(cell, "v"))
    return num, den


def _bc_aeppli_table(model: Model, kind: str, basis: bool) -> CohomologyTable:
    dc = kb_double_complex(model)
    entries: Dict[Index, int] = {}
    reps: Optional[Dict[Index, List[str]]] = {} if basis else None
    for p, q in model.bidegrees():
        cell = kb_cell(model, p, q)
        if not dc.dim(*cell):
            entries[(p, q)] = 0
            if basis:
                reps[(p, q)] = []
            continue
        num, den = _bc_aeppli(dc, cell, kind)
        entries[(p, q)] = num.dim - den.dim
        if basis:
            reps[(p, q)] = _quotient_representatives(model, num, den, p, q)
    return CohomologyTable(kind, entries, reps, model.n)


def bott_chern(model: Model, basis: bool = False) -> CohomologyTable:
    """``(ker ∂_π ∩ ker ∂̄) / im ∂_π∂̄`` per bidegree."""
    return _bc_aeppli_table(model, "BC", basis)


def aeppli(model: Model, basis: bool = False) -> CohomologyTable:
    """``ker ∂_π∂̄ / (im ∂_π + im ∂̄)`` per bidegree."""
    return _bc_aeppli_table(model, "Aeppli", basis)


def lp_cohomology(model: Model, basis: bool = False) -> CohomologyTable:
    """Total cohomology of ``(polyvectors, b_π, ∂̄)`` with ``k = s + q``."""
    dc = lp_double_complex(model)
    degrees = list(range(0, model.n + model.anti_range() + 1))
    return _total_table(dc, "LP", model.n, degrees, model, basis, lambda c: c, polyvector=True)


# ---------------------------------------------------------------------------
# formula mode

@dataclass
class HodgeDiamond:
    n: int
    h: Dict[Tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self):
        for (p, q), v in self.h.items():
            if not (0 <= p <= self.n and 0 <= q <= self.n):
                if v:
                    raise ValueError(f"h^{{{p},{q}}} outside [0,{self.n}]^2")
            if v < 0:
                raise ValueError("Hodge numbers are non-negative")
        self.h = {k: v for k, v in self.h.items() if v and 0 <= k[0] <= self.n and 0 <= k[1] <= self.n}

    def __getitem__(self, pq: Tuple[int, int]) -> int:
        return self.h.get(pq, 0)

    @classmethod
    def delta(cls, n: int) -> "HodgeDiamond":
        """``h^{p,q} = δ_pq``, e.g. projective space."""
        return cls(n, {(p, p): 1 for p in range(n + 1)})

    @classmethod
    def point(cls) -> "HodgeDiamond":
        return cls(0, {(0, 0): 1})

    @classmethod
    def from_table(cls, table: CohomologyTable) -> "HodgeDiamond":
        return cls(table.n, {k: v for k, v in table.entries.items()})

    def to_dict(self):
        return {"n": self.n, "h": [[p, q, v] for (p, q), v in sorted(self.h.items())]}

    @classmethod
    def from_dict(cls, data) -> "HodgeDiamond":
        """Accept ``{"n": n, "h": [[p, q, h], ...]}`` or ``{"n": n, "rows": [[h^{0,0}, h^{0,1}, ...], ...]}``."""
        n = int(data["n"])
        if "rows" in data:
            pairs = {(p, q): v for p, row in enumerate(data["rows"]) for q, v in enumerate(row)}
        else:
            pairs = {(int(p), int(q)): int(v) for p, q, v in data["h"]}
        return cls(n, pairs)

    @classmethod
    def load(cls, path: str) -> "HodgeDiamond":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def kb_from_hodge(h: HodgeDiamond, n: Optional[int] = None) -> CohomologyTable:
    """``H_k = Σ_{p-q = n-k} h^{p,q}`` for ``k = 0..2n``."""
    n = h.n if n is None else n
    entries = {k: sum(v for (p, q), v in h.h.items() if p - q == n - k) for k in range(0, 2 * n + 1)}
    return CohomologyTable("KB-formula", entries, None, n, ("k",))


def kunneth(h1: HodgeDiamond, h2: HodgeDiamond) -> HodgeDiamond:
    """``h(p,q) = Σ h1(a,b) h2(p-a, q-b)``."""
    out: Dict[Tuple[int, int], int] = {}
    for (a, b), x in h1.h.items():
        for (c, d), y in h2.h.items():
            out[(a + c, b + d)] = out.get((a + c, b + d), 0) + x * y
    return HodgeDiamond(h1.n + h2.n, out)
