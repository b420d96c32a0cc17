"""Bigraded invariant form algebras: monomials, expressions and the two model kinds."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple, Union

from ..exactfield import ONE, ZERO, GaussianRational, gr

Coeff = GaussianRational


class ModelError(ValueError):
    """Base class for model construction errors."""


class UnknownGenerator(ModelError):
    pass


class BidegreeMismatch(ModelError):
    pass


class Monomial(NamedTuple):
    """A canonical basis element ``w^I ∧ (anti part)``.

    ``holo`` is a strictly increasing tuple of holomorphic generator indices.
    ``anti`` is a strictly increasing tuple of antiholomorphic generator
    indices for free models, or a coefficient-basis name for tensor models.
    The same shape is reused for polyvectors ``X_I ⊗ (anti part)``.
    """

    holo: Tuple[int, ...]
    anti: Union[Tuple[int, ...], str]


Terms = Dict[Monomial, Coeff]


def merge_sign(a: Sequence[int], b: Sequence[int]) -> int:
    """Sign of the shuffle putting ``a + b`` in increasing order; 0 on overlap."""
    if not a or not b:
        return 1
    inv = 0
    j = 0
    lb = len(b)
    # count pairs (x in a, y in b) with x > y
    for x in a:
        while j < lb and b[j] < x:
            j += 1
        if j < lb and b[j] == x:
            return 0
        inv += j
    return -1 if inv & 1 else 1


def merged(a: Tuple[int, ...], b: Tuple[int, ...]) -> Tuple[int, ...]:
    return tuple(sorted(a + b))


def terms_add(target: Terms, c: Coeff, terms: Mapping[Monomial, Coeff]) -> Terms:
    """In place ``target += c * terms``."""
    for m, x in terms.items():
        t = c * x
        s = target.get(m)
        if s is None:
            if t:
                target[m] = t
        else:
            s = s + t
            if s:
                target[m] = s
            else:
                del target[m]
    return target


class FormExpr:
    """A finite linear combination of basis monomials.

    ``bidegree`` is ``(p, q)`` for homogeneous expressions and ``None`` for
    inhomogeneous ones (e.g. the output of ``exp(ι_π)``).  For polyvector
    expressions see :class:`PolyvectorExpr`.
    """

    __slots__ = ("model", "terms", "bidegree")

    def __init__(self, model: "Model", terms: Optional[Mapping[Monomial, object]] = None, bidegree=None):
        self.model = model
        clean: Terms = {}
        for m, c in (terms or {}).items():
            c = gr(c)
            if c:
                clean[m] = c
        self.terms = clean
        degs = {model.bidegree_of(m) for m in clean}
        if bidegree is None and len(degs) == 1:
            bidegree = next(iter(degs))
        if bidegree is not None:
            bidegree = tuple(bidegree)
            if degs and degs != {bidegree}:
                raise BidegreeMismatch(f"terms of bidegrees {sorted(degs)} in a form declared {bidegree}")
        self.bidegree = bidegree

    @classmethod
    def _wrap(cls, model, terms: Terms, bidegree=None) -> "FormExpr":
        obj = cls.__new__(cls)
        obj.model = model
        obj.terms = terms
        if bidegree is None and terms:
            degs = {model.bidegree_of(m) for m in terms}
            if len(degs) == 1:
                bidegree = next(iter(degs))
        obj.bidegree = bidegree
        return obj

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def total_degree(self) -> Optional[int]:
        if self.bidegree is None:
            degs = {sum(self.model.bidegree_of(m)) for m in self.terms}
            return degs.pop() if len(degs) == 1 else None
        return self.bidegree[0] + self.bidegree[1]

    def components(self) -> Dict[Tuple[int, int], "FormExpr"]:
        out: Dict[Tuple[int, int], Terms] = {}
        for m, c in self.terms.items():
            out.setdefault(self.model.bidegree_of(m), {})[m] = c
        return {bd: type(self)._wrap(self.model, t, bd) for bd, t in sorted(out.items())}

    def _combine(self, other, sign: int):
        if not isinstance(other, FormExpr):
            return NotImplemented
        t = dict(self.terms)
        terms_add(t, ONE if sign > 0 else -ONE, other.terms)
        bd = self.bidegree if self.bidegree == other.bidegree else None
        if not self.terms:
            bd = other.bidegree
        elif not other.terms:
            bd = self.bidegree
        return type(self)._wrap(self.model, t, bd)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return type(self)._wrap(self.model, {m: -c for m, c in self.terms.items()}, self.bidegree)

    def __mul__(self, scalar):
        s = gr(scalar)
        if not s:
            return type(self)._wrap(self.model, {}, self.bidegree)
        return type(self)._wrap(self.model, {m: s * c for m, c in self.terms.items()}, self.bidegree)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * gr(scalar).inverse()

    def wedge(self, other: "FormExpr") -> "FormExpr":
        return type(self)._wrap(self.model, self.model.wedge_terms(self.terms, other.terms))

    __xor__ = wedge

    def __eq__(self, other):
        if isinstance(other, (int, GaussianRational)) and not other:
            return not self.terms
        if not isinstance(other, FormExpr):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __str__(self):
        return self.model.format_terms(self.terms, polyvector=False)

    def __repr__(self):
        return f"FormExpr({self.bidegree}, {str(self)!r})"


class PolyvectorExpr(FormExpr):
    """Element of the invariant model of ``A^{0,•}(Λ^• T)``: ``Σ c X_I ⊗ (anti part)``.

    ``bidegree`` is ``(s, q)``: polyvector degree and antiholomorphic degree.
    """

    __slots__ = ()

    def __str__(self):
        return self.model.format_terms(self.terms, polyvector=True)

    def __repr__(self):
        return f"PolyvectorExpr({self.bidegree}, {str(self)!r})"


@dataclass(frozen=True)
class Generator:
    name: str
    bidegree: Tuple[int, int]


@dataclass
class PoissonBivector:
    """Constant bivector ``Σ c_ij X_i ∧ X_j`` keyed by ``(i, j)`` with ``i < j`` (0-based)."""

    coefficients: Dict[Tuple[int, int], Coeff] = field(default_factory=dict)

    def __post_init__(self):
        clean: Dict[Tuple[int, int], Coeff] = {}
        for (i, j), c in self.coefficients.items():
            c = gr(c)
            if i == j:
                continue
            if i > j:
                i, j, c = j, i, -c
            s = clean.get((i, j), ZERO) + c
            if s:
                clean[(i, j)] = s
            else:
                clean.pop((i, j), None)
        self.coefficients = dict(sorted(clean.items()))

    def is_zero(self) -> bool:
        return not self.coefficients

    def pairing(self, i: int, j: int) -> Coeff:
        """``π(w_i, w_j)`` for holomorphic coframe indices."""
        if i < j:
            return self.coefficients.get((i, j), ZERO)
        if i > j:
            return -self.coefficients.get((j, i), ZERO)
        return ZERO

    def format(self, prefix: str = "X") -> str:
        if not self.coefficients:
            return "0"
        parts = [f"{c} {prefix}{i + 1}^{prefix}{j + 1}" for (i, j), c in self.coefficients.items()]
        return " + ".join(parts)


@dataclass
class CoeffComplex:
    """Finite antiholomorphic coefficient complex of a tensor model.

    ``product_table`` maps an ordered pair of non-unit names to
    ``(coefficient, name)``; the reversed order follows from graded
    commutativity.  ``del_action`` values are expressions of bidegree
    ``(1, deg)`` in the tensor model; ``dbar_action`` values have bidegree
    ``(0, deg + 1)``.  Both are stored as raw term dicts.
    """

    basis: List[Tuple[str, int]]
    product_table: Dict[Tuple[str, str], Tuple[Coeff, str]] = field(default_factory=dict)
    del_action: Dict[str, Terms] = field(default_factory=dict)
    dbar_action: Dict[str, Terms] = field(default_factory=dict)

    def __post_init__(self):
        names = [b for b, _ in self.basis]
        if len(set(names)) != len(names):
            raise ModelError("duplicate coefficient basis names")
        self.degree = dict(self.basis)
        units = [b for b, d in self.basis if d == 0]
        if len(units) != 1:
            raise ModelError("coefficient complex needs exactly one degree-0 element (the unit)")
        self.unit = units[0]
        self.order = {b: k for k, (b, _) in enumerate(self.basis)}

    def names_of_degree(self, q: int) -> List[str]:
        return [b for b, d in self.basis if d == q]

    def max_degree(self) -> int:
        return max(d for _, d in self.basis)

    def product(self, a: str, b: str) -> Optional[Tuple[Coeff, str]]:
        if a == self.unit:
            return ONE, b
        if b == self.unit:
            return ONE, a
        hit = self.product_table.get((a, b))
        if hit is not None:
            return hit
        hit = self.product_table.get((b, a))
        if hit is not None:
            c, name = hit
            if (self.degree[a] * self.degree[b]) & 1:
                c = -c
            return c, name
        return None


class Model:
    """Common interface of the two model kinds.

    Subclasses supply the basis enumeration, the wedge product of
    monomials, and the factorisation of a monomial into generator factors
    used to extend ∂ and ∂̄ as derivations.
    """

    kind: str = ""

    def __init__(self, name: str, n: int, holo_names: Sequence[str], poisson: Optional[PoissonBivector] = None,
                 metadata: Optional[Dict[str, str]] = None):
        if len(holo_names) != n:
            raise ModelError(f"expected {n} holomorphic generators, got {len(holo_names)}")
        if len(set(holo_names)) != len(holo_names):
            raise ModelError("holomorphic generator names must be unique")
        self.name = name
        self.n = n
        self.holo_names = list(holo_names)
        self.poisson = poisson or PoissonBivector()
        for (i, j) in self.poisson.coefficients:
            if not (0 <= i < n and 0 <= j < n):
                raise UnknownGenerator(f"bivector leg X{max(i, j) + 1} beyond dimension {n}")
        self.metadata = dict(metadata or {})
        self._cache: Dict[object, object] = {}

    # -- subclass interface ---------------------------------------------
    def anti_range(self) -> int:
        raise NotImplementedError

    def basis(self, p: int, q: int) -> List[Monomial]:
        raise NotImplementedError

    def bidegree_of(self, m: Monomial) -> Tuple[int, int]:
        raise NotImplementedError

    def wedge_monomials(self, a: Monomial, b: Monomial) -> Optional[Tuple[Coeff, Monomial]]:
        raise NotImplementedError

    def unit(self) -> Monomial:
        raise NotImplementedError

    def factors(self, m: Monomial) -> List[Tuple[object, int]]:
        """Generator factors of ``m`` (key, degree) whose ordered wedge is ``m``."""
        raise NotImplementedError

    def factor_monomial(self, key) -> Monomial:
        raise NotImplementedError

    def del_image(self, key) -> Terms:
        raise NotImplementedError

    def dbar_image(self, key) -> Terms:
        raise NotImplementedError

    def anti_degree(self, m: Monomial) -> int:
        return self.bidegree_of(m)[1]

    # -- derived --------------------------------------------------------
    @property
    def generators(self) -> List[Generator]:
        raise NotImplementedError

    def with_poisson(self, poisson: PoissonBivector) -> "Model":
        raise NotImplementedError

    def bidegrees(self) -> List[Tuple[int, int]]:
        return [(p, q) for p in range(self.n + 1) for q in range(self.anti_range() + 1)]

    def index(self, p: int, q: int) -> Dict[Monomial, int]:
        key = ("index", p, q)
        hit = self._cache.get(key)
        if hit is None:
            hit = {m: k for k, m in enumerate(self.basis(p, q))}
            self._cache[key] = hit
        return hit

    def dim(self, p: int, q: int) -> int:
        return len(self.index(p, q))

    def wedge_terms(self, a: Mapping[Monomial, Coeff], b: Mapping[Monomial, Coeff]) -> Terms:
        out: Terms = {}
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                hit = self.wedge_monomials(m1, m2)
                if hit is None:
                    continue
                s, m = hit
                t = c1 * c2 * s
                prev = out.get(m)
                if prev is None:
                    out[m] = t
                else:
                    prev = prev + t
                    if prev:
                        out[m] = prev
                    else:
                        del out[m]
        return out

    def _derivation(self, m: Monomial, image) -> Terms:
        facs = self.factors(m)
        out: Terms = {}
        deg_before = 0
        for k, (key, deg) in enumerate(facs):
            img = image(key)
            if img:
                prefix = self.unit()
                for key2, _ in facs[:k]:
                    prefix = self.wedge_monomials(prefix, self.factor_monomial(key2))[1]
                suffix = self.unit()
                for key2, _ in facs[k + 1:]:
                    suffix = self.wedge_monomials(suffix, self.factor_monomial(key2))[1]
                part = self.wedge_terms(self.wedge_terms({prefix: ONE}, img), {suffix: ONE})
                terms_add(out, -ONE if deg_before & 1 else ONE, part)
            deg_before += deg
        return out

    def del_monomial(self, m: Monomial) -> Terms:
        return self._derivation(m, self.del_image)

    def dbar_monomial(self, m: Monomial) -> Terms:
        return self._derivation(m, self.dbar_image)

    def iota_monomial(self, m: Monomial, order: str = "ji") -> Terms:
        """Contraction with the bivector on a basis monomial.

        ``order="ji"`` means ``ι_{X_i∧X_j} = ι_{X_j} ∘ ι_{X_i}``, so that
        ``ι_π(w_i ∧ w_j) = π(w_i, w_j)``; ``"ij"`` is the opposite ordering.
        """
        out: Terms = {}
        holo = m.holo
        if len(holo) < 2:
            return out
        pos = {g: k for k, g in enumerate(holo)}
        for (i, j), c in self.poisson.coefficients.items():
            if i not in pos or j not in pos:
                continue
            first, second = (i, j) if order == "ji" else (j, i)
            k1 = pos[first]
            rest = holo[:k1] + holo[k1 + 1:]
            k2 = rest.index(second)
            sign = -1 if (k1 + k2) & 1 else 1
            mono = Monomial(rest[:k2] + rest[k2 + 1:], m.anti)
            terms_add(out, c if sign > 0 else -c, {mono: ONE})
        return out

    # -- names ------------------------------------------------------------
    def holo_generator_index(self, name: str) -> int:
        try:
            return self.holo_names.index(name)
        except ValueError:
            raise UnknownGenerator(name) from None

    def format_monomial(self, m: Monomial, polyvector: bool = False) -> str:
        raise NotImplementedError

    def format_terms(self, terms: Mapping[Monomial, Coeff], polyvector: bool = False) -> str:
        if not terms:
            return "0"
        items = sorted(terms.items(), key=lambda kv: self.sort_key(kv[0]))
        parts = []
        for m, c in items:
            mono = self.format_monomial(m, polyvector)
            parts.append(f"{c}" if mono == "1" else f"{c} {mono}")
        return " + ".join(parts)

    def sort_key(self, m: Monomial):
        p, q = self.bidegree_of(m)
        return (p + q, p, m.holo, self.anti_sort_key(m))

    def anti_sort_key(self, m: Monomial):
        return m.anti

    def form(self, terms: Mapping[Monomial, object], bidegree=None) -> FormExpr:
        return FormExpr(self, terms, bidegree)

    def zero_form(self, p: int, q: int) -> FormExpr:
        return FormExpr._wrap(self, {}, (p, q))

    def monomial_form(self, m: Monomial, coeff=1) -> FormExpr:
        return FormExpr(self, {m: coeff})

    def polyvector(self, terms: Mapping[Monomial, object], bidegree=None) -> PolyvectorExpr:
        return PolyvectorExpr(self, terms, bidegree)

    def basis_count_formula(self, p: int, q: int) -> int:
        raise NotImplementedError

    def __repr__(self):
        return f"<{type(self).__name__} {self.name} n={self.n} π={self.poisson.format()}>"


class FreeModel(Model):
    """Free exterior algebra on holomorphic and antiholomorphic generators."""

    kind = "free"

    def __init__(self, name: str, n: int, holo_names: Sequence[str], anti_names: Sequence[str],
                 del_rules: Optional[Mapping[str, Terms]] = None, dbar_rules: Optional[Mapping[str, Terms]] = None,
                 poisson: Optional[PoissonBivector] = None, metadata: Optional[Dict[str, str]] = None):
        super().__init__(name, n, holo_names, poisson, metadata)
        if len(set(anti_names)) != len(anti_names) or set(anti_names) & set(holo_names):
            raise ModelError("generator names must be unique")
        self.anti_names = list(anti_names)
        self.m = len(anti_names)
        self.del_rules: Dict[str, Terms] = {}
        self.dbar_rules: Dict[str, Terms] = {}
        names = set(self.holo_names) | set(self.anti_names)
        for rules, target, shift in ((del_rules, self.del_rules, (1, 0)), (dbar_rules, self.dbar_rules, (0, 1))):
            for g, terms in (rules or {}).items():
                if g not in names:
                    raise UnknownGenerator(g)
                gp, gq = (1, 0) if g in self.holo_names else (0, 1)
                want = (gp + shift[0], gq + shift[1])
                clean = {mm: gr(c) for mm, c in terms.items() if gr(c)}
                for mm in clean:
                    if self.bidegree_of(mm) != want:
                        raise BidegreeMismatch(
                            f"rule for {g} has a term of bidegree {self.bidegree_of(mm)}, expected {want}")
                if clean:
                    target[g] = clean

    @property
    def generators(self) -> List[Generator]:
        return [Generator(g, (1, 0)) for g in self.holo_names] + [Generator(g, (0, 1)) for g in self.anti_names]

    def with_poisson(self, poisson: PoissonBivector) -> "FreeModel":
        return FreeModel(self.name, self.n, self.holo_names, self.anti_names, self.del_rules, self.dbar_rules,
                         poisson, self.metadata)

    def anti_range(self) -> int:
        return self.m

    def basis(self, p: int, q: int) -> List[Monomial]:
        if not (0 <= p <= self.n and 0 <= q <= self.m):
            return []
        return [Monomial(I, J) for I in combinations(range(self.n), p) for J in combinations(range(self.m), q)]

    def basis_count_formula(self, p: int, q: int) -> int:
        return comb(self.n, p) * comb(self.m, q)

    def bidegree_of(self, m: Monomial) -> Tuple[int, int]:
        return len(m.holo), len(m.anti)

    def unit(self) -> Monomial:
        return Monomial((), ())

    def wedge_monomials(self, a: Monomial, b: Monomial):
        s1 = merge_sign(a.holo, b.holo)
        if not s1:
            return None
        s2 = merge_sign(a.anti, b.anti)
        if not s2:
            return None
        s = s1 * s2
        if (len(a.anti) * len(b.holo)) & 1:
            s = -s
        return (ONE if s > 0 else -ONE), Monomial(merged(a.holo, b.holo), merged(a.anti, b.anti))

    def factors(self, m: Monomial):
        return [(("h", i), 1) for i in m.holo] + [(("a", j), 1) for j in m.anti]

    def factor_monomial(self, key) -> Monomial:
        kind, k = key
        return Monomial((k,), ()) if kind == "h" else Monomial((), (k,))

    def _gen_name(self, key) -> str:
        kind, k = key
        return self.holo_names[k] if kind == "h" else self.anti_names[k]

    def del_image(self, key) -> Terms:
        return self.del_rules.get(self._gen_name(key), {})

    def dbar_image(self, key) -> Terms:
        return self.dbar_rules.get(self._gen_name(key), {})

    def generator_monomial(self, name: str) -> Monomial:
        if name in self.holo_names:
            return Monomial((self.holo_names.index(name),), ())
        if name in self.anti_names:
            return Monomial((), (self.anti_names.index(name),))
        raise UnknownGenerator(name)

    def format_monomial(self, m: Monomial, polyvector: bool = False) -> str:
        if polyvector:
            names = [f"X{i + 1}" for i in m.holo] + [self.anti_names[j] for j in m.anti]
        else:
            names = [self.holo_names[i] for i in m.holo] + [self.anti_names[j] for j in m.anti]
        return "^".join(names) if names else "1"


class TensorModel(Model):
    """Holomorphic exterior algebra tensored with a finite coefficient complex."""

    kind = "tensor"

    def __init__(self, name: str, n: int, holo_names: Sequence[str], coeff: CoeffComplex,
                 del_rules: Optional[Mapping[str, Terms]] = None, poisson: Optional[PoissonBivector] = None,
                 metadata: Optional[Dict[str, str]] = None):
        super().__init__(name, n, holo_names, poisson, metadata)
        if set(b for b, _ in coeff.basis) & set(holo_names):
            raise ModelError("coefficient names clash with generator names")
        self.coeff = coeff
        self.del_rules: Dict[str, Terms] = {}
        for g, terms in (del_rules or {}).items():
            if g not in self.holo_names:
                raise UnknownGenerator(g)
            clean = {mm: gr(c) for mm, c in terms.items() if gr(c)}
            for mm in clean:
                if self.bidegree_of(mm) != (2, 0):
                    raise BidegreeMismatch(f"rule for {g} has a term of bidegree {self.bidegree_of(mm)}, expected (2, 0)")
            if clean:
                self.del_rules[g] = clean
        for b, terms in coeff.del_action.items():
            for mm in terms:
                if self.bidegree_of(mm) != (1, coeff.degree[b]):
                    raise BidegreeMismatch(f"∂ action on {b} has a term of the wrong bidegree")
        for b, terms in coeff.dbar_action.items():
            for mm in terms:
                if self.bidegree_of(mm) != (0, coeff.degree[b] + 1):
                    raise BidegreeMismatch(f"∂̄ action on {b} has a term of the wrong bidegree")

    @property
    def generators(self) -> List[Generator]:
        return [Generator(g, (1, 0)) for g in self.holo_names]

    @property
    def dbar_rules(self) -> Dict[str, Terms]:
        return {}

    def with_poisson(self, poisson: PoissonBivector) -> "TensorModel":
        return TensorModel(self.name, self.n, self.holo_names, self.coeff, self.del_rules, poisson, self.metadata)

    def anti_range(self) -> int:
        return self.coeff.max_degree()

    def basis(self, p: int, q: int) -> List[Monomial]:
        if not 0 <= p <= self.n:
            return []
        names = self.coeff.names_of_degree(q)
        return [Monomial(I, b) for I in combinations(range(self.n), p) for b in names]

    def basis_count_formula(self, p: int, q: int) -> int:
        return comb(self.n, p) * len(self.coeff.names_of_degree(q))

    def bidegree_of(self, m: Monomial) -> Tuple[int, int]:
        return len(m.holo), self.coeff.degree[m.anti]

    def unit(self) -> Monomial:
        return Monomial((), self.coeff.unit)

    def anti_sort_key(self, m: Monomial):
        return self.coeff.order[m.anti]

    def wedge_monomials(self, a: Monomial, b: Monomial):
        s = merge_sign(a.holo, b.holo)
        if not s:
            return None
        prod = self.coeff.product(a.anti, b.anti)
        if prod is None:
            return None
        c, name = prod
        if (self.coeff.degree[a.anti] * len(b.holo)) & 1:
            s = -s
        return (c if s > 0 else -c), Monomial(merged(a.holo, b.holo), name)

    def factors(self, m: Monomial):
        out = [(("h", i), 1) for i in m.holo]
        if m.anti != self.coeff.unit:
            out.append((("c", m.anti), self.coeff.degree[m.anti]))
        return out

    def factor_monomial(self, key) -> Monomial:
        kind, k = key
        return Monomial((k,), self.coeff.unit) if kind == "h" else Monomial((), k)

    def del_image(self, key) -> Terms:
        kind, k = key
        if kind == "h":
            return self.del_rules.get(self.holo_names[k], {})
        return self.coeff.del_action.get(k, {})

    def dbar_image(self, key) -> Terms:
        kind, k = key
        if kind == "h":
            return {}
        return self.coeff.dbar_action.get(k, {})

    def generator_monomial(self, name: str) -> Monomial:
        if name in self.holo_names:
            return Monomial((self.holo_names.index(name),), self.coeff.unit)
        if name in self.coeff.degree:
            return Monomial((), name)
        raise UnknownGenerator(name)

    def format_monomial(self, m: Monomial, polyvector: bool = False) -> str:
        if polyvector:
            names = [f"X{i + 1}" for i in m.holo]
        else:
            names = [self.holo_names[i] for i in m.holo]
        if m.anti != self.coeff.unit:
            names.append(m.anti)
        return "^".join(names) if names else "1"


def enumerate_basis(model: Model, p: int, q: int) -> List[Monomial]:
    """Canonical lexicographic basis of bidegree ``(p, q)``; empty when out of range."""
    return list(model.basis(p, q))
