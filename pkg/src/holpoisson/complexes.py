"""Finite double complexes, their total complexes and column-filtration spectral sequences.

Cells are indexed by ``(a, b)``; the horizontal differential maps
``(a, b) -> (a+1, b)`` and the vertical one ``(a, b) -> (a, b+1)``.  Both
have total degree +1 and anticommute.  The total complex in degree ``k``
is ``⊕_{a+b=k}`` with cells ordered by ascending ``a``, so the filtration
``F^s = ⊕_{a >= s}`` is a suffix of the coordinates.
"""

from __future__ import annotations

from typing import Callable, Dict, List, Optional, Tuple

from .exactfield import (
    ONE,
    SparseMatrix,
    SubspaceBasis,
    Vector,
    image_basis,
    intersect,
    kernel_basis,
    rank,
    restrict_to_coordinates,
    subspace_sum,
)

Cell = Tuple[int, int]


class InvalidPage(ValueError):
    pass


def submatrix(m: SparseMatrix, row_lo: int, row_hi: int, col_lo: int, col_hi: int) -> SparseMatrix:
    out = SparseMatrix(row_hi - row_lo, col_hi - col_lo)
    for (i, j), x in m.entries.items():
        if row_lo <= i < row_hi and col_lo <= j < col_hi:
            out.entries[(i - row_lo, j - col_lo)] = x
    return out


def shift(v: Vector, by: int) -> Vector:
    return {k + by: x for k, x in v.items()}


class DoubleComplex:
    """A bounded double complex given by cell dimensions and differential matrices."""

    def __init__(self, dims: Dict[Cell, int], horizontal: Callable[[int, int], SparseMatrix],
                 vertical: Callable[[int, int], SparseMatrix]):
        self.dims = {c: d for c, d in dims.items()}
        self._h = horizontal
        self._v = vertical
        self._cache: Dict[object, object] = {}
        self.a_range = (min(a for a, _ in dims), max(a for a, _ in dims))
        self.b_range = (min(b for _, b in dims), max(b for _, b in dims))

    def dim(self, a: int, b: int) -> int:
        return self.dims.get((a, b), 0)

    def h(self, a: int, b: int) -> SparseMatrix:
        key = ("h", a, b)
        if key not in self._cache:
            self._cache[key] = self._h(a, b) if self.dim(a, b) else SparseMatrix(self.dim(a + 1, b), 0)
        return self._cache[key]

    def v(self, a: int, b: int) -> SparseMatrix:
        key = ("v", a, b)
        if key not in self._cache:
            self._cache[key] = self._v(a, b) if self.dim(a, b) else SparseMatrix(self.dim(a, b + 1), 0)
        return self._cache[key]

    # -- total complex -------------------------------------------------
    def total_degrees(self) -> List[int]:
        return list(range(self.a_range[0] + self.b_range[0], self.a_range[1] + self.b_range[1] + 1))

    def cells(self, k: int) -> List[Cell]:
        return [(a, k - a) for a in range(self.a_range[0], self.a_range[1] + 1) if self.dim(a, k - a)]

    def offsets(self, k: int) -> Dict[Cell, int]:
        key = ("off", k)
        hit = self._cache.get(key)
        if hit is None:
            hit, off = {}, 0
            for c in self.cells(k):
                hit[c] = off
                off += self.dim(*c)
            self._cache[key] = hit
        return hit

    def total_dim(self, k: int) -> int:
        return sum(self.dim(*c) for c in self.cells(k))

    def filtration_offset(self, k: int, s: int) -> int:
        """First coordinate of ``F^s`` in degree ``k``."""
        off = 0
        for (a, b) in self.cells(k):
            if a >= s:
                break
            off += self.dim(a, b)
        return off

    def total_matrix(self, k: int) -> SparseMatrix:
        key = ("D", k)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        src, tgt = self.offsets(k), self.offsets(k + 1)
        out = SparseMatrix(self.total_dim(k + 1), self.total_dim(k))
        for (a, b), co in src.items():
            for mat, cell in ((self.h(a, b), (a + 1, b)), (self.v(a, b), (a, b + 1))):
                if cell not in tgt:
                    continue
                ro = tgt[cell]
                for (i, j), x in mat.entries.items():
                    out.entries[(i + ro, j + co)] = x
        self._cache[key] = out
        return out

    def total_kernel(self, k: int) -> SubspaceBasis:
        key = ("kerD", k)
        if key not in self._cache:
            self._cache[key] = kernel_basis(self.total_matrix(k))
        return self._cache[key]

    def total_image(self, k: int) -> SubspaceBasis:
        """``im(D: C^{k-1} -> C^k)`` inside ``C^k``."""
        key = ("imD", k)
        if key not in self._cache:
            self._cache[key] = image_basis(self.total_matrix(k - 1)) if self.total_dim(k - 1) else SubspaceBasis(self.total_dim(k))
        return self._cache[key]

    def total_cohomology_dim(self, k: int) -> int:
        n = self.total_dim(k)
        if not n:
            return 0
        r_out = rank(self.total_matrix(k)) if self.total_dim(k + 1) else 0
        r_in = rank(self.total_matrix(k - 1)) if self.total_dim(k - 1) else 0
        return n - r_out - r_in

    def cell_coordinates(self, k: int, cell: Cell) -> range:
        off = self.offsets(k)[cell]
        return range(off, off + self.dim(*cell))

    def pure_image(self, cell: Cell) -> SubspaceBasis:
        """``im D ∩ V(cell)`` in cell-local coordinates."""
        a, b = cell
        k = a + b
        inter = restrict_to_coordinates(self.total_image(k), self.cell_coordinates(k, cell))
        off = self.offsets(k)[cell]
        return SubspaceBasis(self.dim(a, b), [shift(v, -off) for v in inter.vectors])

    # -- spectral sequence --------------------------------------------
    def _z(self, k: int, s: int, r: int) -> SubspaceBasis:
        """``Z_r^s`` in degree ``k``: ``x ∈ F^s`` with ``Dx ∈ F^{s+r}`` (total coordinates)."""
        key = ("Z", k, s, r)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        n = self.total_dim(k)
        lo = self.filtration_offset(k, s)
        if lo >= n:
            out = SubspaceBasis(n)
        elif r <= 0 or not self.total_dim(k + 1):
            out = SubspaceBasis(n, ({i: ONE} for i in range(lo, n)))
        else:
            hi = self.filtration_offset(k + 1, s + r)
            sub = submatrix(self.total_matrix(k), 0, hi, lo, n)
            ker = kernel_basis(sub)
            out = SubspaceBasis(n, [shift(v, lo) for v in ker.vectors])
        self._cache[key] = out
        return out

    def _b(self, k: int, s: int, r: int) -> SubspaceBasis:
        """``Z_{r-1}^{s+1} + D Z_{r-1}^{s-r+1}`` in degree ``k``."""
        n = self.total_dim(k)
        parts = [self._z(k, s + 1, r - 1)]
        if self.total_dim(k - 1):
            z = self._z(k - 1, s - r + 1, r - 1)
            D = self.total_matrix(k - 1)
            parts.append(SubspaceBasis(n, [D.apply(v) for v in z.vectors]))
        return subspace_sum(*parts)

    def page_dim(self, r: int, s: int, t: int) -> int:
        if r < 0:
            raise InvalidPage(f"page index must be non-negative, got {r}")
        if not self.dim(s, t):
            return 0
        if r == 0:
            return self.dim(s, t)
        k = s + t
        z = self._z(k, s, r)
        b = self._b(k, s, r)
        return subspace_sum(z, b).dim - b.dim

    def page(self, r: int) -> Dict[Cell, int]:
        if r < 0:
            raise InvalidPage(f"page index must be non-negative, got {r}")
        return {c: self.page_dim(r, *c) for c in sorted(self.dims)}

    def stable_page_index(self) -> int:
        """A page index past which every differential vanishes for degree reasons."""
        return self.a_range[1] - self.a_range[0] + 2

    def e_infinity(self) -> Dict[Cell, int]:
        return self.page(self.stable_page_index())

    # -- helpers for lemma checks ----------------------------------------
    def kernel_in_cell(self, cell: Cell, which: str) -> SubspaceBasis:
        a, b = cell
        mat = self.h(a, b) if which == "h" else self.v(a, b)
        return kernel_basis(mat)

    def image_into_cell(self, cell: Cell, which: str) -> SubspaceBasis:
        a, b = cell
        if which == "h":
            mat = self.h(a - 1, b) if self.dim(a - 1, b) else SparseMatrix(self.dim(a, b), 0)
        else:
            mat = self.v(a, b - 1) if self.dim(a, b - 1) else SparseMatrix(self.dim(a, b), 0)
        return image_basis(mat)

    def image_hv_into_cell(self, cell: Cell) -> SubspaceBasis:
        """``im(h ∘ v)`` arriving at ``cell`` from ``(a-1, b-1)``."""
        a, b = cell
        if not self.dim(a - 1, b - 1):
            return SubspaceBasis(self.dim(a, b))
        return image_basis(self.h(a - 1, b) @ self.v(a - 1, b - 1))

    def both_kernel(self, cell: Cell) -> SubspaceBasis:
        a, b = cell
        from .exactfield import vstack

        return kernel_basis(vstack([self.h(a, b), self.v(a, b)]))

    def hv_kernel(self, cell: Cell) -> SubspaceBasis:
        a, b = cell
        return kernel_basis(self.h(a, b + 1) @ self.v(a, b))


def dims_by_total(page: Dict[Cell, int]) -> Dict[int, int]:
    """Sum of cell dimensions on each antidiagonal ``a + b = k``."""
    out: Dict[int, int] = {}
    for (a, b), d in page.items():
        out[a + b] = out.get(a + b, 0) + d
    return out


def euler_characteristic(page: Dict[Cell, int]) -> int:
    return sum((-1) ** k * d for k, d in dims_by_total(page).items())
