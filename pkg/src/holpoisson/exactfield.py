"""Exact arithmetic over Q(i) and sparse linear algebra on top of it.

Scalars are :class:`GaussianRational` values.  Vectors are plain dicts
``{index: GaussianRational}`` with no stored zeros; a :class:`SparseMatrix`
keeps its entries in the same style.  Every routine here is exact and the
results do not depend on the order in which entries were inserted.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

__all__ = [
    "GaussianRational",
    "ZERO",
    "ONE",
    "gr",
    "SparseMatrix",
    "SubspaceBasis",
    "NoSolution",
    "NotASubspace",
    "AmbientMismatch",
    "rank",
    "kernel_basis",
    "image_basis",
    "solve",
    "quotient_dim",
    "intersect",
    "span",
    "subspace_sum",
    "restrict_to_coordinates",
    "vec_add",
    "vec_scale",
    "vec_axpy",
    "vec_sub",
]


class GaussianRational:
    """An exact element ``re + im*i`` of the Gaussian rationals.

    Stored as ``(a + b*i) / d`` with ``d > 0`` and ``gcd(a, b, d) == 1``.
    """

    __slots__ = ("_a", "_b", "_d")

    def __init__(self, re=0, im=0):
        if isinstance(re, GaussianRational):
            if im:
                re = re + GaussianRational(0, 1) * GaussianRational(im)
            self._a, self._b, self._d = re._a, re._b, re._d
            return
        if isinstance(re, str):
            val = GaussianRational.parse(re)
            if im:
                val = val + GaussianRational(0, 1) * GaussianRational(im)
            self._a, self._b, self._d = val._a, val._b, val._d
            return
        fr = Fraction(re)
        fi = Fraction(im)
        d = fr.denominator * fi.denominator // gcd(fr.denominator, fi.denominator)
        a = fr.numerator * (d // fr.denominator)
        b = fi.numerator * (d // fi.denominator)
        g = gcd(a, b, d)
        self._a, self._b, self._d = a // g, b // g, d // g

    # -- construction -----------------------------------------------------
    @staticmethod
    def _raw(a: int, b: int, d: int) -> "GaussianRational":
        if d != 1:
            g = gcd(a, b, d)
            if g != 1:
                a //= g
                b //= g
                d //= g
        obj = object.__new__(GaussianRational)
        obj._a = a
        obj._b = b
        obj._d = d
        return obj

    _TOKEN = re.compile(
        r"""^\s*(?:
            (?P<re>[+-]?\d+(?:/\d+)?)
            (?:\s*(?P<isign>[+-])\s*(?P<im>\d+(?:/\d+)?)?\s*\*?\s*i)?
          | (?P<pure>[+-]?(?:\d+(?:/\d+)?)?)\s*\*?\s*i
        )\s*$""",
        re.VERBOSE,
    )

    @classmethod
    def parse(cls, text: str) -> "GaussianRational":
        """Parse ``"3"``, ``"-1/2"``, ``"2+3i"``, ``"1/2-3/4 i"``, ``"-i"``, ``"(1+i)"``."""
        s = text.strip()
        if s.startswith("(") and s.endswith(")"):
            s = s[1:-1]
        m = cls._TOKEN.match(s)
        if not m:
            raise ValueError(f"not a Gaussian rational: {text!r}")
        if m.group("pure") is not None:
            body = m.group("pure")
            if body in ("", "+"):
                return cls(0, 1)
            if body == "-":
                return cls(0, -1)
            return cls(0, Fraction(body))
        re_part = Fraction(m.group("re"))
        im_part = Fraction(0)
        if m.group("isign"):
            im_part = Fraction(m.group("im")) if m.group("im") else Fraction(1)
            if m.group("isign") == "-":
                im_part = -im_part
        return cls(re_part, im_part)

    # -- accessors --------------------------------------------------------
    @property
    def re(self) -> Fraction:
        return Fraction(self._a, self._d)

    @property
    def im(self) -> Fraction:
        return Fraction(self._b, self._d)

    def is_real(self) -> bool:
        return self._b == 0

    def conjugate(self) -> "GaussianRational":
        return GaussianRational._raw(self._a, -self._b, self._d)

    def __bool__(self) -> bool:
        return self._a != 0 or self._b != 0

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, GaussianRational):
            if isinstance(other, int):
                return GaussianRational._raw(self._a + other * self._d, self._b, self._d)
            try:
                other = GaussianRational(other)
            except (TypeError, ValueError):
                return NotImplemented
        d1, d2 = self._d, other._d
        if d1 == d2:
            return GaussianRational._raw(self._a + other._a, self._b + other._b, d1)
        return GaussianRational._raw(
            self._a * d2 + other._a * d1, self._b * d2 + other._b * d1, d1 * d2
        )

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational._raw(-self._a, -self._b, self._d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        if not isinstance(other, GaussianRational):
            try:
                other = GaussianRational(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, GaussianRational):
            if isinstance(other, int):
                return GaussianRational._raw(self._a * other, self._b * other, self._d)
            try:
                other = GaussianRational(other)
            except (TypeError, ValueError):
                return NotImplemented
        a1, b1, a2, b2 = self._a, self._b, other._a, other._b
        if b1 == 0 and b2 == 0:
            return GaussianRational._raw(a1 * a2, 0, self._d * other._d)
        return GaussianRational._raw(a1 * a2 - b1 * b2, a1 * b2 + a2 * b1, self._d * other._d)

    __rmul__ = __mul__

    def inverse(self) -> "GaussianRational":
        a, b, d = self._a, self._b, self._d
        if a == 0 and b == 0:
            raise ZeroDivisionError("inverse of zero")
        if b == 0:
            if a < 0:
                return GaussianRational._raw(-d, 0, -a)
            return GaussianRational._raw(d, 0, a)
        n = a * a + b * b
        return GaussianRational._raw(a * d, -b * d, n)

    def __truediv__(self, other):
        if not isinstance(other, GaussianRational):
            try:
                other = GaussianRational(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return GaussianRational(other) * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- comparison / hashing ---------------------------------------------
    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self._a == other._a and self._b == other._b and self._d == other._d
        if isinstance(other, (int, Fraction)):
            return self._b == 0 and Fraction(self._a, self._d) == other
        if isinstance(other, complex):
            return self == GaussianRational(Fraction(other.real), Fraction(other.imag))
        return NotImplemented

    def __hash__(self):
        if self._b == 0:
            return hash(Fraction(self._a, self._d))
        return hash((self._a, self._b, self._d))

    def __repr__(self):
        return f"GaussianRational({str(self)!r})"

    def __str__(self):
        re_s = _frac_str(self._a, self._d)
        if self._b == 0:
            return re_s
        im = Fraction(self._b, self._d)
        mag = abs(im)
        im_s = "" if mag == 1 else _frac_str(mag.numerator, mag.denominator)
        if self._a == 0:
            return ("-" if im < 0 else "") + im_s + "i"
        return re_s + ("-" if im < 0 else "+") + im_s + "i"


def _frac_str(n: int, d: int) -> str:
    f = Fraction(n, d)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
_MINUS_ONE = GaussianRational(-1)


def gr(value) -> GaussianRational:
    """Coerce ints, Fractions, strings and complex numbers to GaussianRational."""
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, complex):
        return GaussianRational(Fraction(value.real), Fraction(value.imag))
    return GaussianRational(value)


# ---------------------------------------------------------------------------
# sparse vectors

Vector = Dict[int, GaussianRational]


def vec_add(u: Mapping[int, GaussianRational], v: Mapping[int, GaussianRational]) -> Vector:
    out = dict(u)
    for k, c in v.items():
        s = out.get(k)
        if s is None:
            out[k] = c
        else:
            s = s + c
            if s:
                out[k] = s
            else:
                del out[k]
    return out


def vec_sub(u: Mapping[int, GaussianRational], v: Mapping[int, GaussianRational]) -> Vector:
    return vec_axpy(dict(u), _MINUS_ONE, v)


def vec_scale(c: GaussianRational, v: Mapping[int, GaussianRational]) -> Vector:
    if not c:
        return {}
    if c == ONE:
        return dict(v)
    return {k: c * x for k, x in v.items()}


def vec_axpy(target: Vector, c: GaussianRational, v: Mapping[int, GaussianRational]) -> Vector:
    """In place ``target += c * v``; returns ``target``."""
    for k, x in v.items():
        s = target.get(k)
        t = c * x
        if s is None:
            target[k] = t
        else:
            s = s + t
            if s:
                target[k] = s
            else:
                del target[k]
    return target


class NoSolution(ValueError):
    """Raised by :func:`solve` when the right-hand side is not in the image."""


class NotASubspace(ValueError):
    """Raised when a quotient is requested for a non-contained denominator."""


class AmbientMismatch(ValueError):
    """Raised when two subspaces live in different ambient spaces."""


# ---------------------------------------------------------------------------
# reduced row echelon form


class _RREF:
    """Incrementally maintained reduced row echelon form.

    ``rows[p]`` is the row whose pivot (least index) is ``p``; its pivot
    entry is 1 and every other row vanishes at ``p``.  Optionally each row
    carries a companion vector recording the combination of inserted
    vectors it came from.
    """

    __slots__ = ("rows", "col_rows", "companion")

    def __init__(self):
        self.rows: Dict[int, Vector] = {}
        self.col_rows: Dict[int, set] = {}
        self.companion: Dict[int, Vector] = {}

    def reduce(self, v: Mapping[int, GaussianRational], comp: Optional[Vector] = None):
        v = dict(v)
        rows = self.rows
        for p in sorted(k for k in v if k in rows):
            c = v.get(p)
            if c is None:
                continue
            vec_axpy(v, -c, rows[p])
            if comp is not None:
                vec_axpy(comp, -c, self.companion[p])
        return v, comp

    def insert(self, v: Mapping[int, GaussianRational], comp: Optional[Vector] = None) -> Optional[int]:
        """Reduce ``v`` and add it if independent; returns the new pivot or None."""
        v, comp = self.reduce(v, comp)
        if not v:
            return None
        return self.add_reduced(v, comp)

    def add_reduced(self, v: Vector, comp: Optional[Vector] = None) -> int:
        p = min(v)
        inv = v[p].inverse()
        if inv != ONE:
            v = {k: inv * x for k, x in v.items()}
            if comp is not None:
                comp = {k: inv * x for k, x in comp.items()}
        # clear column p in the existing rows
        col_rows = self.col_rows
        for q in list(col_rows.get(p, ())):
            row = self.rows[q]
            c = row.get(p)
            if c is None:
                continue
            for k, x in v.items():
                s = row.get(k)
                t = -(c * x)
                if s is None:
                    row[k] = t
                    col_rows.setdefault(k, set()).add(q)
                else:
                    s = s + t
                    if s:
                        row[k] = s
                    else:
                        del row[k]
                        col_rows[k].discard(q)
            if comp is not None:
                vec_axpy(self.companion[q], -c, comp)
        self.rows[p] = v
        for k in v:
            self.col_rows.setdefault(k, set()).add(p)
        if comp is not None:
            self.companion[p] = comp
        return p

    def contains(self, v: Mapping[int, GaussianRational]) -> bool:
        r, _ = self.reduce(v)
        return not r


# ---------------------------------------------------------------------------
# matrices


class SparseMatrix:
    """A rows x cols matrix over Q(i); absent entries are zero."""

    __slots__ = ("rows", "cols", "entries", "_row_view", "_col_view")

    def __init__(self, rows: int, cols: int, entries: Optional[Mapping[Tuple[int, int], object]] = None):
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        self.rows = rows
        self.cols = cols
        clean: Dict[Tuple[int, int], GaussianRational] = {}
        for (i, j), x in (entries or {}).items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise IndexError(f"entry ({i}, {j}) outside {rows}x{cols}")
            x = gr(x)
            if x:
                clean[(i, j)] = x
        self.entries = clean
        self._row_view = None
        self._col_view = None

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[Mapping[int, GaussianRational]]) -> "SparseMatrix":
        m = cls(rows, len(columns))
        for j, col in enumerate(columns):
            for i, x in col.items():
                if x:
                    if not 0 <= i < rows:
                        raise IndexError(f"row index {i} outside 0..{rows - 1}")
                    m.entries[(i, j)] = x
        return m

    @classmethod
    def identity(cls, n: int) -> "SparseMatrix":
        return cls(n, n, {(i, i): ONE for i in range(n)})

    @classmethod
    def zero(cls, rows: int, cols: int) -> "SparseMatrix":
        return cls(rows, cols)

    def row_vectors(self) -> List[Vector]:
        if self._row_view is None:
            rv: List[Vector] = [dict() for _ in range(self.rows)]
            for (i, j), x in self.entries.items():
                rv[i][j] = x
            self._row_view = rv
        return self._row_view

    def column_vectors(self) -> List[Vector]:
        if self._col_view is None:
            cv: List[Vector] = [dict() for _ in range(self.cols)]
            for (i, j), x in self.entries.items():
                cv[j][i] = x
            self._col_view = cv
        return self._col_view

    def apply(self, v: Mapping[int, GaussianRational]) -> Vector:
        cols = self.column_vectors()
        out: Vector = {}
        for j, x in v.items():
            if x:
                vec_axpy(out, x, cols[j])
        return out

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        cols = [self.apply(c) for c in other.column_vectors()]
        return SparseMatrix.from_columns(self.rows, cols)

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        out = dict(self.entries)
        for k, x in other.entries.items():
            s = out.get(k)
            s = x if s is None else s + x
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        m = SparseMatrix(self.rows, self.cols)
        m.entries = out
        return m

    def __neg__(self) -> "SparseMatrix":
        m = SparseMatrix(self.rows, self.cols)
        m.entries = {k: -x for k, x in self.entries.items()}
        return m

    def is_zero(self) -> bool:
        return not self.entries

    def to_dense(self) -> List[List[GaussianRational]]:
        out = [[ZERO] * self.cols for _ in range(self.rows)]
        for (i, j), x in self.entries.items():
            out[i][j] = x
        return out

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return (self.rows, self.cols, self.entries) == (other.rows, other.cols, other.entries)

    def __repr__(self):
        return f"SparseMatrix({self.rows}x{self.cols}, nnz={len(self.entries)})"


def vstack(blocks: Sequence[SparseMatrix]) -> SparseMatrix:
    """Stack matrices with equal column counts on top of each other."""
    if not blocks:
        raise ValueError("nothing to stack")
    cols = blocks[0].cols
    out = SparseMatrix(sum(b.rows for b in blocks), cols)
    off = 0
    for b in blocks:
        if b.cols != cols:
            raise ValueError("column mismatch")
        for (i, j), x in b.entries.items():
            out.entries[(i + off, j)] = x
        off += b.rows
    return out


def hstack(blocks: Sequence[SparseMatrix]) -> SparseMatrix:
    if not blocks:
        raise ValueError("nothing to stack")
    rows = blocks[0].rows
    out = SparseMatrix(rows, sum(b.cols for b in blocks))
    off = 0
    for b in blocks:
        if b.rows != rows:
            raise ValueError("row mismatch")
        for (i, j), x in b.entries.items():
            out.entries[(i, j + off)] = x
        off += b.cols
    return out


# ---------------------------------------------------------------------------
# subspaces


class SubspaceBasis:
    """A subspace of Q(i)^ambient_dim held in reduced row echelon form."""

    __slots__ = ("ambient_dim", "_rref")

    def __init__(self, ambient_dim: int, vectors: Iterable[Mapping[int, GaussianRational]] = ()):
        self.ambient_dim = ambient_dim
        self._rref = _RREF()
        for v in vectors:
            for k in v:
                if not 0 <= k < ambient_dim:
                    raise IndexError(f"coordinate {k} outside ambient dimension {ambient_dim}")
            self._rref.insert(v)

    @classmethod
    def _from_rref(cls, ambient_dim: int, rref: _RREF) -> "SubspaceBasis":
        obj = cls(ambient_dim)
        obj._rref = rref
        return obj

    @classmethod
    def full(cls, n: int) -> "SubspaceBasis":
        return cls(n, ({i: ONE} for i in range(n)))

    @property
    def vectors(self) -> List[Vector]:
        """Basis vectors in reduced echelon form, ordered by pivot."""
        return [self._rref.rows[p] for p in sorted(self._rref.rows)]

    @property
    def pivots(self) -> List[int]:
        return sorted(self._rref.rows)

    @property
    def dim(self) -> int:
        return len(self._rref.rows)

    def __len__(self) -> int:
        return self.dim

    def contains(self, v: Mapping[int, GaussianRational]) -> bool:
        return self._rref.contains(v)

    def reduce(self, v: Mapping[int, GaussianRational]) -> Vector:
        """Normal form of ``v`` modulo this subspace."""
        return self._rref.reduce(v)[0]

    def issubspace(self, other: "SubspaceBasis") -> bool:
        _check_ambient(self, other)
        return all(other.contains(v) for v in self.vectors)

    def __eq__(self, other):
        if not isinstance(other, SubspaceBasis):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.vectors == other.vectors

    def __repr__(self):
        return f"SubspaceBasis(dim={self.dim}, ambient={self.ambient_dim})"


def _check_ambient(a: SubspaceBasis, b: SubspaceBasis) -> None:
    if a.ambient_dim != b.ambient_dim:
        raise AmbientMismatch(f"ambient dimensions differ: {a.ambient_dim} vs {b.ambient_dim}")


def span(ambient_dim: int, vectors: Iterable[Mapping[int, GaussianRational]]) -> SubspaceBasis:
    return SubspaceBasis(ambient_dim, vectors)


def subspace_sum(*spaces: SubspaceBasis) -> SubspaceBasis:
    if not spaces:
        raise ValueError("need at least one subspace")
    for s in spaces[1:]:
        _check_ambient(spaces[0], s)
    out = SubspaceBasis(spaces[0].ambient_dim)
    for s in spaces:
        for v in s.vectors:
            out._rref.insert(v)
    return out


def rank(m: SparseMatrix) -> int:
    """Exact rank of ``m``."""
    r = _RREF()
    vecs = m.row_vectors() if m.rows <= m.cols else m.column_vectors()
    for v in vecs:
        if v:
            r.insert(v)
    return len(r.rows)


def _row_rref(m: SparseMatrix) -> _RREF:
    r = _RREF()
    for v in m.row_vectors():
        if v:
            r.insert(v)
    return r


def kernel_basis(m: SparseMatrix) -> SubspaceBasis:
    """Basis of ``{x : m x = 0}``; its dimension is ``cols - rank(m)``."""
    r = _row_rref(m)
    pivots = set(r.rows)
    vecs: List[Vector] = []
    for f in range(m.cols):
        if f in pivots:
            continue
        v: Vector = {f: ONE}
        for p in r.col_rows.get(f, ()):
            c = r.rows[p][f]
            v[p] = -c
        vecs.append(v)
    return SubspaceBasis(m.cols, vecs)


def image_basis(m: SparseMatrix) -> SubspaceBasis:
    """Column space of ``m`` inside Q(i)^rows."""
    return SubspaceBasis(m.rows, (c for c in m.column_vectors() if c))


def solve(m: SparseMatrix, b: Mapping[int, GaussianRational]) -> Vector:
    """Canonical solution of ``m x = b``.

    Pivots are taken at the least column index and free variables are set
    to zero, so the answer is a function of ``(m, b)`` alone.  Raises
    :class:`NoSolution` if ``b`` is not in the column space.
    """
    for i in b:
        if not 0 <= i < m.rows:
            raise IndexError(f"right-hand side index {i} outside 0..{m.rows - 1}")
    # each row carries its right-hand side as a companion in slot 0
    r = _RREF()
    for i, v in enumerate(m.row_vectors()):
        rhs = b.get(i)
        red, comp = r.reduce(v, {0: rhs} if rhs else {})
        if red:
            r.add_reduced(red, comp)
        elif comp:
            raise NoSolution("right-hand side is not in the image")
    x: Vector = {}
    for p, comp in r.companion.items():
        val = comp.get(0)
        if val:
            x[p] = val
    return x


def quotient_dim(numerator: SubspaceBasis, denominator: SubspaceBasis) -> int:
    """``dim numerator - dim denominator`` after checking containment."""
    _check_ambient(numerator, denominator)
    for v in denominator.vectors:
        if not numerator.contains(v):
            raise NotASubspace("denominator is not contained in numerator")
    return numerator.dim - denominator.dim


def intersect(a: SubspaceBasis, b: SubspaceBasis) -> SubspaceBasis:
    """Basis of ``a ∩ b`` by the Zassenhaus construction."""
    _check_ambient(a, b)
    n = a.ambient_dim
    if a.dim == 0 or b.dim == 0:
        return SubspaceBasis(n)
    r = _RREF()
    for u in a.vectors:
        w = dict(u)
        for k, x in u.items():
            w[k + n] = x
        r.insert(w)
    for v in b.vectors:
        r.insert(v)
    out = []
    for p in sorted(r.rows):
        if p >= n:
            out.append({k - n: x for k, x in r.rows[p].items()})
    return SubspaceBasis(n, out)


def restrict_to_coordinates(space: SubspaceBasis, coords: Iterable[int]) -> SubspaceBasis:
    """Intersection of ``space`` with the coordinate subspace spanned by ``coords``.

    Re-eliminates with the chosen coordinates ordered last, so rows whose
    pivot falls among them are supported on them alone.
    """
    n = space.ambient_dim
    keep = sorted(set(coords))
    keep_set = set(keep)
    others = [k for k in range(n) if k not in keep_set]
    order = {k: i for i, k in enumerate(others + keep)}
    back = others + keep
    cut = len(others)
    r = _RREF()
    for v in space.vectors:
        r.insert({order[k]: x for k, x in v.items()})
    out = []
    for p, row in r.rows.items():
        if p >= cut:
            out.append({back[k]: x for k, x in row.items()})
    return SubspaceBasis(n, out)
