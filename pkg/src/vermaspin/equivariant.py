"""Equivariant differential operators built from singular vectors.

A family of singular vectors spanning one isotypic component dualizes, via
the jet pairing <x^a (x) s, f> = (d^a <s, f>)(0), to a constant-coefficient
differential operator acting on dual-spinor-valued polynomials.  The
operator intertwines the function-picture actions of the two twists
attached to the component; the verifier checks that property exactly,
generator by generator, on polynomial test functions.

Twist bookkeeping.  The operator stores the theorem twists of its source and
target inducing modules (lambda_source, lambda_target = lambda_source -
order).  The function-picture parameter that realizes the contragredient of
the degree-shifted polynomial model at realization parameter mu is 1 - mu,
so the verifier runs the non-hatted realization at

    source: 1 - (lambda_source + n/2),  target: source + order,

with the dual fiber actions.  In contragredient subscripts these are
-(lambda_source + n/2) and -(lambda_target + n/2); both are reported, and
the tests assert that no shifted variant passes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .exact import (
    GaussianRational,
    SparseMatrix,
    express_in_span,
    rational,
    rational_to_string,
    qi,
    QI_ONE,
)
from .polyspinor import SpinorPoly, OperatorSpec
from .realization import verma_action, function_action, generators
from .fischer import monogenic_basis
from .singular import singular_vectors, isotypic_split
from .context import Context

__all__ = [
    "EquivariantOperator",
    "IntertwiningReport",
    "from_singular_vector",
    "verify_intertwining",
    "dirac_power",
    "twistor",
    "dual_dirac_symbol",
]

HALF = rational(1, 2)


@dataclass
class EquivariantOperator:
    """Constant-coefficient operator from dual-spinor fields to dual-family fields.

    coefficients maps a derivative multi-index to the (target_dim x
    spinor_dim) matrix applied to that derivative of the argument.
    """

    n: int
    p: int
    q: int
    order: int
    lambda_source: object
    lambda_target: object
    source_dim: int
    target_dim: int
    coefficients: dict
    family_rotations: dict  # (i, j), i < j -> action on the singular family
    kind: str = "generic"
    dirac_symbol_ratio: GaussianRational | None = None

    def pi_star_pair(self):
        """Contragredient-picture subscripts of the verified twist pair."""
        nh = rational(self.n, 2)
        return (-(rational(self.lambda_source) + nh),
                -(rational(self.lambda_target) + nh))

    def apply(self, poly: SpinorPoly) -> SpinorPoly:
        if poly.n != self.n or poly.dim != self.source_dim:
            raise ValueError("argument shape mismatch")
        out = SpinorPoly.zero(self.n, self.target_dim)
        for deriv, mat in self.coefficients.items():
            # differentiate first, then apply the fiber matrix
            diff = _pure_derivative(self.n, self.source_dim, deriv)
            out = out + diff.apply(poly).fiber_map(mat)
        return out

    def perturbed(self, deriv, row, col, delta=QI_ONE):
        """Copy with one coefficient entry shifted (negative-control helper)."""
        coeffs = dict(self.coefficients)
        mat = coeffs[deriv]
        bump = SparseMatrix.from_entries(mat.rows, mat.cols, [(row, col, delta)])
        coeffs[deriv] = mat + bump
        return EquivariantOperator(
            n=self.n, p=self.p, q=self.q, order=self.order,
            lambda_source=self.lambda_source, lambda_target=self.lambda_target,
            source_dim=self.source_dim, target_dim=self.target_dim,
            coefficients=coeffs, family_rotations=self.family_rotations,
            kind=self.kind, dirac_symbol_ratio=self.dirac_symbol_ratio,
        )

    def to_json(self):
        src, tgt = self.pi_star_pair()
        return {
            "kind": self.kind,
            "order": self.order,
            "twists": {
                "lambda_source": rational_to_string(rational(self.lambda_source)),
                "lambda_target": rational_to_string(rational(self.lambda_target)),
                "pi_star_source": rational_to_string(src),
                "pi_star_target": rational_to_string(tgt),
            },
            "source_dim": self.source_dim,
            "target_dim": self.target_dim,
            "dirac_symbol_ratio": (
                self.dirac_symbol_ratio.to_string()
                if self.dirac_symbol_ratio is not None else None
            ),
            "coefficients": {
                ",".join(map(str, deriv)): mat.to_json()["entries"]
                for deriv, mat in sorted(self.coefficients.items(), reverse=True)
            },
        }


def _pure_derivative(n, dim, deriv):
    z = (0,) * n
    from .polyspinor import OpTerm
    return OperatorSpec(n, dim, [OpTerm(z, tuple(deriv), None, QI_ONE)])


@dataclass
class IntertwiningReport:
    residual_zero: bool
    generators_checked: int
    test_elements: int
    max_residual_terms: int
    first_failure: tuple | None = None

    def to_json(self):
        return {
            "residual_zero": self.residual_zero,
            "generators_checked": self.generators_checked,
            "test_elements": self.test_elements,
            "max_residual_terms": self.max_residual_terms,
            "first_failure": (
                None if self.first_failure is None
                else {"generator": str(self.first_failure[0]),
                      "element": str(self.first_failure[1])}
            ),
        }


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------


def from_singular_vector(svs, lam_thm, ctx: Context, kind="generic",
                         verify_singular=True) -> EquivariantOperator:
    """Dualize a singular-vector family into a differential operator.

    ``svs`` is one SpinorPoly or a list spanning a single isotypic component
    at theorem twist lam_thm; each monomial x^a (x) w of the r-th family
    member becomes row r of the coefficient matrix of d^a.
    """
    if isinstance(svs, SpinorPoly):
        svs = [svs]
    if not svs:
        raise ValueError("empty singular family")
    lam_thm = rational(lam_thm)
    degrees = {p.homogeneous_degree() for p in svs}
    if len(degrees) != 1 or None in degrees:
        raise ValueError("family must be homogeneous of one degree")
    degree = degrees.pop()
    lam_real = lam_thm + rational(ctx.n, 2)
    if verify_singular:
        for i in range(1, ctx.n + 1):
            spec = verma_action(("g", i), lam_real, ctx.rep)
            for sv in svs:
                if not spec.apply(sv).is_zero():
                    raise ValueError("family member is not a singular vector")
    dim_s = ctx.spinor_dim
    coeffs = {}
    for r, sv in enumerate(svs):
        for mono, vec in sv.terms.items():
            entries = coeffs.setdefault(mono, [])
            for b, v in vec.items():
                entries.append((r, b, v))
    coefficients = {
        mono: SparseMatrix.from_entries(len(svs), dim_s, entries)
        for mono, entries in coeffs.items()
    }
    rotations = _family_rotations(svs, lam_real, ctx)
    return EquivariantOperator(
        n=ctx.n, p=ctx.sig.p, q=ctx.sig.q, order=degree,
        lambda_source=lam_thm, lambda_target=lam_thm - degree,
        source_dim=dim_s, target_dim=len(svs),
        coefficients=coefficients, family_rotations=rotations, kind=kind,
    )


def _family_rotations(svs, lam_real, ctx: Context):
    """Rotation action on the family span, solved exactly per generator pair.

    Raises if the family is not closed under the rotation action (i.e. is
    not an isotypic submodule).
    """
    degree = svs[0].homogeneous_degree()
    basis = ctx.graded_basis(degree)
    vecs = [basis.coordinates(sv) for sv in svs]
    out = {}
    for i in range(1, ctx.n + 1):
        for j in range(i + 1, ctx.n + 1):
            spec = verma_action(("l", i, j), lam_real, ctx.rep)
            images = [basis.coordinates(spec.apply(sv)) for sv in svs]
            coeffs = express_in_span(vecs, images, basis.size)
            if coeffs is None:
                raise ValueError("family is not rotation-closed")
            out[(i, j)] = SparseMatrix.from_entries(
                len(svs), len(svs),
                ((r, c, coeffs[c][r]) for c in range(len(svs))
                 for r in range(len(svs)) if coeffs[c][r]),
            )
    return out


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------


def _pi_star_specs(op: EquivariantOperator, ctx: Context, source_offset=0,
                   target_offset=0):
    """Function-picture actions on both sides of the operator.

    The offsets shift the realization parameters away from the derived ones;
    nonzero offsets are used only by the negative controls.
    """
    nu_src, nu_tgt = op.pi_star_pair()
    lam_pi_src = nu_src + 1 + source_offset
    lam_pi_tgt = nu_tgt + 1 + target_offset
    dual_rot = {key: m.transpose().scale(-1) for key, m in op.family_rotations.items()}
    src = {}
    tgt = {}
    for gen in generators(ctx.n):
        src[gen] = function_action(gen, lam_pi_src, ctx.rep, module="dual-spinor")
        tgt[gen] = function_action(gen, lam_pi_tgt, ctx.rep,
                                   fiber_matrices=dual_rot,
                                   fiber_dim=op.target_dim)
    return src, tgt


def operator_matrix(op: EquivariantOperator, degree, ctx: Context):
    """Matrix of the operator from the degree-d source component."""
    from .polyspinor import _falling
    src = ctx.graded_basis(degree, op.source_dim)
    tgt = ctx.graded_basis(degree - op.order, op.target_dim)
    entries = []
    for deriv, mat in op.coefficients.items():
        cols = mat.columns()
        for mono in src.monos:
            ff = _falling(mono, deriv)
            if ff is None:
                continue
            target_mono = tuple(a - b for a, b in zip(mono, deriv))
            scale = qi(ff)
            for b in range(op.source_dim):
                col = cols.get(b)
                if not col:
                    continue
                cbase = src.index(mono, b)
                for r, w in col.items():
                    entries.append((tgt.index(target_mono, r), cbase, w * scale))
    return SparseMatrix.from_entries(tgt.size, src.size, entries)


def verify_intertwining(op: EquivariantOperator, test_degree, ctx: Context,
                        source_offset=0, target_offset=0) -> IntertwiningReport:
    """Check op . pi*_src(Y) - pi*_tgt(Y) . op = 0 exactly.

    The identity is checked as assembled matrices on every graded component
    of degree <= test_degree (equivalently on every monomial test function up
    to that degree), for every algebra generator.  A nonzero residual is
    reported, not raised.
    """
    if test_degree < op.order:
        raise ValueError("test degree below operator order")
    from .polyspinor import assemble as _assemble
    src, tgt = _pi_star_specs(op, ctx, source_offset, target_offset)
    gens = generators(ctx.n)
    max_terms = 0
    first = None
    tested = 0
    for gen in gens:
        s_spec = src[gen]
        t_spec = tgt[gen]
        shifts = s_spec.shifts()
        shift = shifts[0] if shifts else 0
        for d in range(0, test_degree + 1):
            s_mat = _assemble(s_spec, d, ctx.basis_maker(op.source_dim)).matrix
            lhs = operator_matrix(op, d + shift, ctx) @ s_mat
            t_mat = _assemble(t_spec, d - op.order,
                              ctx.basis_maker(op.target_dim)).matrix
            rhs = t_mat @ operator_matrix(op, d, ctx)
            res = lhs - rhs
            tested += lhs.cols
            if not res.is_zero():
                terms = res.num_entries()
                if terms > max_terms:
                    max_terms = terms
                if first is None:
                    first = (gen, d)
    return IntertwiningReport(
        residual_zero=first is None,
        generators_checked=len(gens),
        test_elements=tested,
        max_residual_terms=max_terms,
        first_failure=first,
    )


# ---------------------------------------------------------------------------
# the named operator families
# ---------------------------------------------------------------------------


def dirac_power(a, ctx: Context, verify=True) -> EquivariantOperator:
    """Order-a conformal power of the Dirac operator (a odd).

    Built from the canonical singular family X^a applied to the spinor basis
    at theorem twist -(n - 2 - a)/2; the coefficient matrices are compared
    entrywise with the a-th symbolic power of the first-order dual Dirac
    symbol and the exact ratio is recorded.
    """
    if a < 1 or a % 2 == 0:
        raise ValueError("order of a Dirac power must be odd")
    n = ctx.n
    lam_thm = -rational(n - 2 - a, 2)
    family = _x_power_family(a, ctx)
    op = from_singular_vector(family, lam_thm, ctx, kind="dirac-power",
                              verify_singular=verify)
    naive = dual_dirac_symbol(a, ctx)
    op.dirac_symbol_ratio = _proportionality(op.coefficients, naive)
    return op


def _x_power_family(a, ctx: Context):
    """X^a applied to each spinor basis vector, as explicit polynomials."""
    from .fischer import x_power_matrix
    basis0 = ctx.graded_basis(0)
    xk = x_power_matrix(ctx, a, 0)
    out = []
    for b in range(ctx.spinor_dim):
        coords = xk.mul_vec({basis0.index((0,) * ctx.n, b): QI_ONE})
        out.append(ctx.graded_basis(a).from_coordinates(coords))
    return out


def twistor(a, ctx: Context, verify=True) -> EquivariantOperator:
    """Order-a twistor operator with target the dual of the monogenic space."""
    if a < 1:
        raise ValueError("twistor order must be a positive integer")
    lam_thm = rational(a) + HALF
    family = monogenic_basis(ctx, a).elements
    if not family:
        raise ValueError("no singular vectors at this order")
    return from_singular_vector(family, lam_thm, ctx, kind="twistor",
                                verify_singular=verify)


def dual_dirac_symbol(a, ctx: Context):
    """Coefficients of (sum_j eps_j G_j^T d_j)^a as a constant-coefficient map."""
    n, dim = ctx.n, ctx.spinor_dim
    first = {}
    for j in range(1, n + 1):
        deriv = tuple(1 if k == j - 1 else 0 for k in range(n))
        first[deriv] = ctx.rep.gamma(j).transpose().scale(ctx.sig.eps(j))
    out = { (0,) * n: SparseMatrix.identity(dim) }
    for _ in range(a):
        nxt = {}
        for d1, m1 in out.items():
            for d2, m2 in first.items():
                d = tuple(x + y for x, y in zip(d1, d2))
                m = m2 @ m1
                cur = nxt.get(d)
                nxt[d] = m if cur is None else cur + m
        out = {d: m for d, m in nxt.items() if not m.is_zero()}
    return out


def _proportionality(coeffs_a, coeffs_b):
    """The exact constant c with A = c * B entrywise, or None."""
    if set(coeffs_a) != set(coeffs_b):
        return None
    ratio = None
    for key in coeffs_a:
        a, b = coeffs_a[key], coeffs_b[key]
        for r, c, v in a.entries():
            w = b.get(r, c)
            if not w:
                return None
            cur = v / w
            if ratio is None:
                ratio = cur
            elif cur != ratio:
                return None
        if ratio is not None and b.scale(ratio) != a:
            return None
    return ratio
