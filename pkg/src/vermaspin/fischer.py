"""Monogenic spaces and the Fischer decomposition.

M_a is the kernel of the Dirac operator on the degree-a component of the
spinor-valued polynomials; the whole polynomial space decomposes exactly as
the direct sum of X^b M_a over a, b >= 0.  Everything here is computed by
exact kernel extraction and exact linear solves; no dimension formula is
assumed anywhere (dimensions are later *checked* against the telescoping
rule, not produced by it).
"""

from __future__ import annotations

from dataclasses import dataclass

from .exact import SparseMatrix, nullspace, express_in_span, QI_ONE
from .polyspinor import SpinorPoly, assemble
from .realization import _osp_cached
from .context import Context

__all__ = [
    "MonogenicBasis",
    "FischerComponent",
    "monogenic_basis",
    "monogenic_dim",
    "fischer_decompose",
    "apply_x_power",
    "dirac_matrix",
    "euler_matrix",
    "x_mult_matrix",
    "x_power_matrix",
]


@dataclass
class MonogenicBasis:
    """Canonical basis of M_a, with per-element chirality tags for even n."""

    degree: int
    elements: list
    chirality: list  # '+', '-' or None per element


@dataclass
class FischerComponent:
    """One summand X^k (part) with part a monogenic polynomial of degree m."""

    k: int
    m: int
    part: SpinorPoly


def dirac_matrix(ctx: Context, degree):
    """Assembled Dirac operator on the degree-d component (cached)."""
    D, _, _ = _osp_cached(ctx.rep)
    return ctx.assemble_cached("dirac", D, degree)


def euler_matrix(ctx: Context, degree):
    _, E, _ = _osp_cached(ctx.rep)
    return ctx.assemble_cached("euler", E, degree)


def x_mult_matrix(ctx: Context, degree):
    _, _, X = _osp_cached(ctx.rep)
    return ctx.assemble_cached("xmult", X, degree)


def x_power_matrix(ctx: Context, k, degree):
    """Matrix of multiplication by X^k from degree d to degree d + k."""
    key = ("xpow", k, degree)
    m = ctx.cache.get(key)
    if m is None:
        if k == 0:
            m = SparseMatrix.identity(ctx.graded_basis(degree).size)
        else:
            m = x_mult_matrix(ctx, degree + k - 1).matrix @ x_power_matrix(ctx, k - 1, degree)
        ctx.cache[key] = m
    return m


def monogenic_basis(ctx: Context, a) -> MonogenicBasis:
    """Exact basis of M_a = ker D in degree a, chirality-refined for even n."""
    if a < 0:
        raise ValueError("degree must be nonnegative")
    key = ("monogenic", a)
    cached = ctx.cache.get(key)
    if cached is not None:
        return cached
    basis = ctx.graded_basis(a)
    op = dirac_matrix(ctx, a)
    kernel = nullspace(op.matrix, modular_shortcut=False)
    if ctx.chirality is None:
        elements = [basis.from_coordinates(v) for v in kernel]
        tags = [None] * len(elements)
    else:
        elements, tags = [], []
        for proj, tag in ((ctx.chirality.plus, "+"), (ctx.chirality.minus, "-")):
            projected = []
            for v in kernel:
                poly = basis.from_coordinates(v).fiber_map(proj)
                if not poly.is_zero():
                    projected.append(basis.coordinates(poly))
            for v in _span_basis(projected, basis.size):
                elements.append(basis.from_coordinates(v))
                tags.append(tag)
    out = MonogenicBasis(degree=a, elements=elements, chirality=tags)
    ctx.cache[key] = out
    return out


def _span_basis(vectors, dim):
    from .exact import _canonical_basis
    return _canonical_basis(vectors, dim)


def monogenic_dim(ctx: Context, a) -> int:
    return len(monogenic_basis(ctx, a).elements)


def fischer_decompose(ctx: Context, poly: SpinorPoly):
    """Exact components of a homogeneous polynomial in the sum of X^k M_(d-k).

    Returns FischerComponent entries with nonzero parts; their reconstruction
    sum_k X^k part_k equals the input exactly.
    """
    d = poly.homogeneous_degree()
    if d is None:
        if poly.is_zero():
            return []
        raise ValueError("non-homogeneous input")
    basis = ctx.graded_basis(d)
    target = basis.coordinates(poly)
    columns = []
    slots = []
    for k in range(d + 1):
        m = d - k
        mono = monogenic_basis(ctx, m)
        xk = x_power_matrix(ctx, k, m)
        mbasis = ctx.graded_basis(m)
        for j, el in enumerate(mono.elements):
            columns.append(xk.mul_vec(mbasis.coordinates(el)))
            slots.append((k, m, j))
    coeffs = express_in_span(columns, [target], basis.size)
    if coeffs is None:
        raise ValueError("polynomial escapes the monogenic decomposition")
    parts = {}
    for (k, m, j), c in zip(slots, coeffs[0]):
        if not c:
            continue
        mono = monogenic_basis(ctx, m)
        cur = parts.get((k, m))
        add = mono.elements[j].scale(c)
        parts[(k, m)] = add if cur is None else cur + add
    return [FischerComponent(k=k, m=m, part=part)
            for (k, m), part in sorted(parts.items())]


def apply_x_power(ctx: Context, k, poly: SpinorPoly) -> SpinorPoly:
    """X^k applied to a homogeneous polynomial."""
    d = poly.homogeneous_degree()
    if d is None:
        if poly.is_zero():
            return poly
        raise ValueError("non-homogeneous input")
    basis = ctx.graded_basis(d)
    out = x_power_matrix(ctx, k, d).mul_vec(basis.coordinates(poly))
    return ctx.graded_basis(d + k).from_coordinates(out)
