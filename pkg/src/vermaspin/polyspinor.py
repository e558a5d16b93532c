"""Spinor-valued polynomials, graded bases, and operator assembly.

A :class:`SpinorPoly` is a finite map from exponent tuples to sparse fiber
vectors.  A :class:`GradedBasis` fixes the deterministic ordering
(descending lex on exponents, then fiber index) used to turn operators into
matrices, so that every assembled matrix is reproducible bit for bit.

An :class:`OperatorSpec` is a symbolic sum of terms

    coeff * x^mono * M * d^deriv

with M a fiber matrix (None for the identity); specs are closed under sum,
scaling and composition, and can either be applied directly to polynomials
or assembled into an exact sparse matrix between graded components.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .exact import (
    GaussianRational,
    SparseMatrix,
    QI_ONE,
    QI_ZERO,
    qi,
)

__all__ = [
    "monomials",
    "SpinorPoly",
    "GradedBasis",
    "OpTerm",
    "OperatorSpec",
    "LinearOperator",
    "assemble",
]


@lru_cache(maxsize=None)
def monomials(n, degree):
    """All exponent tuples of length n and total degree d, descending lex."""
    if degree < 0:
        return ()
    if n == 1:
        return ((degree,),)
    out = []
    for first in range(degree, -1, -1):
        for rest in monomials(n - 1, degree - first):
            out.append((first,) + rest)
    return tuple(out)


def mono_degree(mono):
    return sum(mono)


class SpinorPoly:
    """Polynomial with values in a fiber of dimension ``dim``.

    terms: exponent tuple -> {fiber index -> GaussianRational}; zero vectors
    are never stored.
    """

    __slots__ = ("n", "dim", "terms")

    def __init__(self, n, dim, terms=None):
        self.n = n
        self.dim = dim
        self.terms = {}
        if terms:
            for mono, vec in terms.items():
                vec = {i: v for i, v in vec.items() if v}
                if vec:
                    self.terms[mono] = vec

    @classmethod
    def zero(cls, n, dim):
        return cls(n, dim)

    @classmethod
    def constant(cls, n, dim, fiber_index, coeff=QI_ONE):
        return cls(n, dim, {(0,) * n: {fiber_index: coeff}})

    @classmethod
    def monomial(cls, n, dim, mono, fiber_index, coeff=QI_ONE):
        return cls(n, dim, {tuple(mono): {fiber_index: coeff}})

    def copy(self):
        return SpinorPoly(self.n, self.dim,
                          {m: dict(v) for m, v in self.terms.items()})

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        out = {m: dict(v) for m, v in self.terms.items()}
        for m, vec in other.terms.items():
            tgt = out.setdefault(m, {})
            for i, v in vec.items():
                w = tgt.get(i)
                nv = v if w is None else w + v
                if nv:
                    tgt[i] = nv
                elif i in tgt:
                    del tgt[i]
            if not tgt:
                del out[m]
        return SpinorPoly(self.n, self.dim, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, s):
        s = s if isinstance(s, GaussianRational) else qi(s)
        if not s:
            return SpinorPoly.zero(self.n, self.dim)
        return SpinorPoly(self.n, self.dim,
                          {m: {i: v * s for i, v in vec.items()}
                           for m, vec in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, SpinorPoly) and self.n == other.n \
            and self.dim == other.dim and self.terms == other.terms

    def degrees(self):
        return sorted({mono_degree(m) for m in self.terms})

    def homogeneous_degree(self):
        """The common degree of all terms, or None for mixed/zero."""
        degs = self.degrees()
        return degs[0] if len(degs) == 1 else None

    def degree_part(self, d):
        return SpinorPoly(self.n, self.dim,
                          {m: dict(v) for m, v in self.terms.items()
                           if mono_degree(m) == d})

    def fiber_map(self, mat: SparseMatrix):
        """Apply a fiber matrix pointwise: terms become mat @ vec."""
        out = {}
        for m, vec in self.terms.items():
            nv = mat.mul_vec(vec)
            if nv:
                out[m] = nv
        return SpinorPoly(self.n, mat.rows, out)

    def iter_sorted(self):
        for m in sorted(self.terms, reverse=True):
            vec = self.terms[m]
            for i in sorted(vec):
                yield m, i, vec[i]

    def to_json(self):
        terms = []
        for m in sorted(self.terms, reverse=True):
            vec = self.terms[m]
            terms.append({
                "exponents": list(m),
                "vector": [[i, vec[i].to_string()] for i in sorted(vec)],
            })
        return {"n": self.n, "fiber_dim": self.dim, "terms": terms}

    @classmethod
    def from_json(cls, obj):
        terms = {}
        for t in obj["terms"]:
            terms[tuple(t["exponents"])] = {
                int(i): GaussianRational.from_string(s) for i, s in t["vector"]
            }
        return cls(obj["n"], obj["fiber_dim"], terms)

    def __repr__(self):
        return "SpinorPoly(n=%d, dim=%d, %d terms)" % (self.n, self.dim, len(self.terms))


class GradedBasis:
    """Ordered basis of the degree-d component: (monomial, fiber index) pairs."""

    __slots__ = ("n", "dim", "degree", "monos", "_mono_index")

    def __init__(self, n, dim, degree):
        self.n = n
        self.dim = dim
        self.degree = degree
        self.monos = monomials(n, degree) if degree >= 0 else ()
        self._mono_index = {m: k for k, m in enumerate(self.monos)}

    @property
    def size(self):
        return len(self.monos) * self.dim

    def index(self, mono, fiber_index):
        return self._mono_index[mono] * self.dim + fiber_index

    def element(self, idx):
        return self.monos[idx // self.dim], idx % self.dim

    def coordinates(self, poly: SpinorPoly):
        """Sparse coordinate vector of a homogeneous polynomial."""
        out = {}
        for m, vec in poly.terms.items():
            base = self._mono_index[m] * self.dim
            for i, v in vec.items():
                out[base + i] = v
        return out

    def from_coordinates(self, coords):
        terms = {}
        for idx, v in coords.items():
            if not v:
                continue
            m, i = self.element(idx)
            terms.setdefault(m, {})[i] = v
        return SpinorPoly(self.n, self.dim, terms)


@dataclass(frozen=True)
class OpTerm:
    """One summand coeff * x^mono * mat * d^deriv."""

    mono: tuple
    deriv: tuple
    mat: SparseMatrix | None
    coeff: GaussianRational

    @property
    def shift(self):
        return mono_degree(self.mono) - mono_degree(self.deriv)


class OperatorSpec:
    """Symbolic differential operator on fiber-valued polynomials."""

    __slots__ = ("n", "dim", "terms")

    def __init__(self, n, dim, terms=()):
        self.n = n
        self.dim = dim
        self.terms = [t for t in terms if t.coeff]

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, n, dim):
        return cls(n, dim)

    @classmethod
    def scalar(cls, n, dim, value):
        value = value if isinstance(value, GaussianRational) else qi(value)
        z = (0,) * n
        return cls(n, dim, [OpTerm(z, z, None, value)])

    @classmethod
    def coordinate(cls, n, dim, i, coeff=QI_ONE):
        """Multiplication by x_i (1-based)."""
        z = (0,) * n
        coeff = coeff if isinstance(coeff, GaussianRational) else qi(coeff)
        mono = tuple(1 if k == i - 1 else 0 for k in range(n))
        return cls(n, dim, [OpTerm(mono, z, None, coeff)])

    @classmethod
    def monomial_mult(cls, n, dim, i, power, coeff=QI_ONE):
        """Multiplication by x_i^power (1-based)."""
        z = (0,) * n
        coeff = coeff if isinstance(coeff, GaussianRational) else qi(coeff)
        mono = tuple(power if k == i - 1 else 0 for k in range(n))
        return cls(n, dim, [OpTerm(mono, z, None, coeff)])

    @classmethod
    def derivative(cls, n, dim, i, coeff=QI_ONE):
        """d/dx_i (1-based)."""
        z = (0,) * n
        coeff = coeff if isinstance(coeff, GaussianRational) else qi(coeff)
        deriv = tuple(1 if k == i - 1 else 0 for k in range(n))
        return cls(n, dim, [OpTerm(z, deriv, None, coeff)])

    @classmethod
    def fiber(cls, n, mat: SparseMatrix, coeff=QI_ONE):
        z = (0,) * n
        coeff = coeff if isinstance(coeff, GaussianRational) else qi(coeff)
        return cls(n, mat.rows, [OpTerm(z, z, mat, coeff)])

    # -- algebra -------------------------------------------------------------

    def __add__(self, other):
        if (self.n, self.dim) != (other.n, other.dim):
            raise ValueError("operator spec shape mismatch")
        return OperatorSpec(self.n, self.dim, list(self.terms) + list(other.terms))

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, s):
        s = s if isinstance(s, GaussianRational) else qi(s)
        return OperatorSpec(self.n, self.dim,
                            [OpTerm(t.mono, t.deriv, t.mat, t.coeff * s)
                             for t in self.terms])

    def compose(self, other):
        """self after other, normal-ordered exactly (Leibniz reordering)."""
        if (self.n, self.dim) != (other.n, other.dim):
            raise ValueError("operator spec shape mismatch")
        out = []
        for t1 in self.terms:
            for t2 in other.terms:
                out.extend(_compose_terms(self.n, t1, t2))
        return OperatorSpec(self.n, self.dim, out).combined()

    def combined(self):
        """Merge like terms (same mono/deriv; identity-fiber terms by sum)."""
        scalars = {}
        matrices = {}
        for t in self.terms:
            key = (t.mono, t.deriv)
            if t.mat is None:
                scalars[key] = scalars.get(key, QI_ZERO) + t.coeff
            else:
                cur = matrices.get(key)
                add = t.mat.scale(t.coeff)
                matrices[key] = add if cur is None else cur + add
        terms = []
        for key, c in scalars.items():
            if c:
                terms.append(OpTerm(key[0], key[1], None, c))
        for key, m in matrices.items():
            if not m.is_zero():
                terms.append(OpTerm(key[0], key[1], m, QI_ONE))
        return OperatorSpec(self.n, self.dim, terms)

    def shifts(self):
        return sorted({t.shift for t in self.terms})

    # -- action --------------------------------------------------------------

    def apply(self, poly: SpinorPoly) -> SpinorPoly:
        """Exact application; supports mixed-degree polynomials."""
        if poly.n != self.n or poly.dim != self.dim:
            raise ValueError("polynomial shape mismatch")
        acc_terms = {}
        for t in self.terms:
            cols = t.mat.columns() if t.mat is not None else None
            for mono, vec in poly.terms.items():
                ff = _falling(mono, t.deriv)
                if ff is None:
                    continue
                target = tuple(a - b + c for a, b, c in zip(mono, t.deriv, t.mono))
                scale = t.coeff if ff == 1 else t.coeff * qi(ff)
                if cols is None:
                    contrib = {i: v * scale for i, v in vec.items()}
                else:
                    contrib = {}
                    for i, v in vec.items():
                        col = cols.get(i)
                        if not col:
                            continue
                        for r, w in col.items():
                            x = contrib.get(r)
                            nv = w * v if x is None else x + w * v
                            contrib[r] = nv
                    contrib = {r: v * scale for r, v in contrib.items() if v}
                if not contrib:
                    continue
                tgt = acc_terms.setdefault(target, {})
                for i, v in contrib.items():
                    w = tgt.get(i)
                    nv = v if w is None else w + v
                    if nv:
                        tgt[i] = nv
                    elif i in tgt:
                        del tgt[i]
                if not tgt:
                    del acc_terms[target]
        return SpinorPoly(self.n, self.dim, acc_terms)

    def __repr__(self):
        return "OperatorSpec(n=%d, dim=%d, %d terms)" % (self.n, self.dim, len(self.terms))


def _falling(mono, deriv):
    """Product of falling factorials d^deriv x^mono -> coefficient, or None."""
    out = 1
    for a, b in zip(mono, deriv):
        if b == 0:
            continue
        if a < b:
            return None
        for k in range(a, a - b, -1):
            out *= k
    return out


@lru_cache(maxsize=None)
def _reorder_1d(d, m):
    """d^d x^m = sum_s C(d,s) m!/(m-s)! x^(m-s) d^(d-s); list of (s, coeff)."""
    from math import comb
    out = []
    top = min(d, m)
    for s in range(top + 1):
        c = comb(d, s)
        for k in range(m, m - s, -1):
            c *= k
        out.append((s, c))
    return tuple(out)


def _compose_terms(n, t1: OpTerm, t2: OpTerm):
    """Normal order (x^m1 M1 d^d1)(x^m2 M2 d^d2)."""
    mat = None
    if t1.mat is not None and t2.mat is not None:
        mat = t1.mat @ t2.mat
    elif t1.mat is not None:
        mat = t1.mat
    elif t2.mat is not None:
        mat = t2.mat
    base = t1.coeff * t2.coeff
    if not base:
        return []
    choices = [_reorder_1d(t1.deriv[k], t2.mono[k]) for k in range(n)]
    out = []

    def rec(k, coeff, sub):
        if k == n:
            mono = tuple(t1.mono[i] + t2.mono[i] - sub[i] for i in range(n))
            deriv = tuple(t1.deriv[i] + t2.deriv[i] - sub[i] for i in range(n))
            out.append(OpTerm(mono, deriv, mat, coeff))
            return
        for s, c in choices[k]:
            sub[k] = s
            rec(k + 1, coeff if c == 1 else coeff * qi(c), sub)
        sub[k] = 0

    rec(0, base, [0] * n)
    return out


@dataclass
class LinearOperator:
    """Assembled exact matrix between graded components."""

    matrix: SparseMatrix
    source: GradedBasis
    target: GradedBasis

    def apply_coords(self, coords):
        return self.matrix.mul_vec(coords)

    def compose(self, inner: "LinearOperator") -> "LinearOperator":
        if inner.target.degree != self.source.degree:
            raise ValueError("degree mismatch in composition")
        return LinearOperator(self.matrix @ inner.matrix, inner.source, self.target)

    def __add__(self, other):
        return LinearOperator(self.matrix + other.matrix, self.source, self.target)

    def scale(self, s):
        return LinearOperator(self.matrix.scale(s), self.source, self.target)

    def to_json(self):
        obj = self.matrix.to_json()
        obj["source_degree"] = self.source.degree
        obj["target_degree"] = self.target.degree
        obj["fiber_dim"] = self.source.dim
        return obj


def assemble(spec: OperatorSpec, src_degree, basis_cache=None) -> LinearOperator:
    """Exact matrix of a uniform-shift spec on the degree-d component.

    A spec with mixed degree shifts is rejected ("non-homogeneous spec"); a
    negative target degree yields a valid empty-codomain matrix.
    """
    shifts = spec.shifts()
    if len(shifts) > 1:
        raise ValueError("non-homogeneous spec: degree shifts %s" % shifts)
    shift = shifts[0] if shifts else 0
    mk = basis_cache if basis_cache is not None else (
        lambda d: GradedBasis(spec.n, spec.dim, d))
    src = mk(src_degree)
    tgt = mk(src_degree + shift)
    entries = []
    for t in spec.terms:
        cols = t.mat.columns() if t.mat is not None else None
        for mono in src.monos:
            ff = _falling(mono, t.deriv)
            if ff is None:
                continue
            target_mono = tuple(a - b + c for a, b, c in zip(mono, t.deriv, t.mono))
            scale = t.coeff if ff == 1 else t.coeff * qi(ff)
            col_base = src.index(mono, 0)
            row_base = tgt.index(target_mono, 0)
            if cols is None:
                for i in range(spec.dim):
                    entries.append((row_base + i, col_base + i, scale))
            else:
                for i in range(spec.dim):
                    col = cols.get(i)
                    if not col:
                        continue
                    for r, w in col.items():
                        entries.append((row_base + r, col_base + i, w * scale))
    matrix = SparseMatrix.from_entries(tgt.size, src.size, entries)
    return LinearOperator(matrix, src, tgt)
