"""Command-line interface: classify, scan, fischer, intertwiner, selftest.

Exit codes: 0 = success (and every requested check matched); 2 = a
theorem mismatch or nonzero residual was found (a first-class scientific
outcome, not a crash); 1 = usage or configuration error.

All report bytes are deterministic for a fixed configuration; JSON reports
additionally carry a ``generated_at`` timestamp field, which is the only
field that varies between runs.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time

from .exact import rational, rational_from_string, rational_to_string, qi
from .context import Context
from .fischer import monogenic_basis, monogenic_dim
from .singular import classify, scan, ClassificationReport
from .equivariant import dirac_power, twistor, verify_intertwining

__all__ = ["main", "build_parser"]


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on usage errors; the contract wants 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write("error: %s\n" % message)
        raise SystemExit(1)


def _rational_arg(s):
    try:
        return rational_from_string(s)
    except ValueError:
        raise argparse.ArgumentTypeError(
            "expected an exact rational like 5/2 (floats are not accepted): %r" % s)


def _parse_grid(s):
    m = re.fullmatch(
        r"(?P<a>[+-]?\d+(?:/\d+)?)\.\.(?P<b>[+-]?\d+(?:/\d+)?):(?P<s>\d+(?:/\d+)?)",
        s.strip())
    if not m:
        raise argparse.ArgumentTypeError(
            "expected a grid like -4..4:1/2 with exact rational bounds and step")
    a = rational_from_string(m.group("a"))
    b = rational_from_string(m.group("b"))
    step = rational_from_string(m.group("s"))
    if step <= 0 or b < a:
        raise argparse.ArgumentTypeError("grid must have positive step and a <= b")
    out = []
    x = a
    while x <= b:
        out.append(x)
        x = x + step
    return out


def build_parser():
    parser = _Parser(prog="vermaspin",
                     description="Exact singular-vector classification and "
                                 "equivariant spinor operators")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--p", type=int, required=True, help="positive signature count")
        p.add_argument("--q", type=int, default=0, help="negative signature count")
        p.add_argument("--variant", choices=["standard", "alt"], default="standard",
                       help="gamma-matrix construction")
        p.add_argument("--output", help="write the report here instead of stdout")

    c = sub.add_parser("classify", help="classify singular vectors at one twist")
    common(c)
    c.add_argument("--lambda", dest="lam", type=_rational_arg, required=True,
                   help="theorem twist, an exact rational like 5/2")
    c.add_argument("--dmax", type=int, default=6)
    c.add_argument("--format", choices=["json", "text"], default="json")

    s = sub.add_parser("scan", help="sweep a twist grid and classify each point")
    common(s)
    s.add_argument("--lambda-grid", dest="grid", type=_parse_grid, required=True,
                   help="grid like -4..4:1/2")
    s.add_argument("--dmax", type=int, default=6)
    s.add_argument("--format", choices=["csv", "json"], default="csv")

    f = sub.add_parser("fischer", help="monogenic dimensions and decomposition scheme")
    common(f)
    f.add_argument("--dmax", type=int, default=6)
    f.add_argument("--format", choices=["json", "csv"], default="json")

    i = sub.add_parser("intertwiner", help="build and verify an equivariant operator")
    common(i)
    i.add_argument("--kind", choices=["dirac", "twistor"], required=True)
    i.add_argument("--a", type=int, required=True, help="operator order")
    i.add_argument("--test-degree", dest="test_degree", type=int, default=5)

    t = sub.add_parser("selftest", help="run the invariant suite")
    t.add_argument("--verbose", action="store_true")
    return parser


def _context(args):
    if args.p < 0 or args.q < 0 or args.p + args.q < 3:
        raise SystemExit(_fail("n >= 3 required"))
    return Context(args.p, args.q, variant=args.variant)


def _fail(message):
    sys.stderr.write("error: %s\n" % message)
    return 1


def _emit(text, output):
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


SCHEMA_VERSION = 1


def _json_dump(obj):
    obj = dict(obj)
    obj["schema_version"] = SCHEMA_VERSION
    obj["generated_at"] = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_classify(args):
    ctx = _context(args)
    if args.dmax < 1:
        return _fail("dmax must be at least 1")
    report = classify(ctx, args.lam, args.dmax)
    if args.format == "json":
        _emit(_json_dump(report.to_json()), args.output)
    else:
        _emit(report.to_text() + "\n", args.output)
    return 0 if report.match else 2


CSV_HEADER = "n,p,q,lambda,degree,label_k,label_m,chirality,dim,predicted,match"


def report_csv_rows(report: ClassificationReport):
    base = [report.n, report.p, report.q, rational_to_string(report.lam_thm)]
    match = "true" if report.match else "false"
    rows = []
    for c in report.found:
        if c.chirality_dims is None:
            rows.append(base + [c.degree, c.k, c.m, "none", c.dim, report.case, match])
        else:
            for tag in ("+", "-"):
                d = c.chirality_dims.get(tag, 0)
                if d:
                    rows.append(base + [c.degree, c.k, c.m, tag, d, report.case, match])
    return rows


def cmd_scan(args):
    ctx = _context(args)
    if args.dmax < 1:
        return _fail("dmax must be at least 1")
    reports = scan(ctx, args.grid, args.dmax)
    all_match = all(r.match for r in reports)
    if args.format == "json":
        payload = {
            "reports": [r.to_json() for r in reports],
            "all_match": all_match,
        }
        _emit(_json_dump(payload), args.output)
    else:
        lines = [CSV_HEADER]
        for r in reports:
            for row in report_csv_rows(r):
                lines.append(",".join(str(x) for x in row))
        _emit("\n".join(lines) + "\n", args.output)
    return 0 if all_match else 2


def cmd_fischer(args):
    ctx = _context(args)
    if args.dmax < 0:
        return _fail("dmax must be nonnegative")
    spaces = []
    for d in range(args.dmax + 1):
        basis = monogenic_basis(ctx, d)
        entry = {"d": d, "dim": len(basis.elements)}
        if ctx.chirality is not None:
            entry["components"] = {
                "+": sum(1 for t in basis.chirality if t == "+"),
                "-": sum(1 for t in basis.chirality if t == "-"),
            }
        spaces.append(entry)
    if args.format == "json":
        payload = {
            "n": ctx.n, "p": ctx.sig.p, "q": ctx.sig.q, "d_max": args.dmax,
            "spaces": spaces,
        }
        _emit(_json_dump(payload), args.output)
    else:
        lines = ["degree,x_power,monogenic_degree,dim"]
        for d in range(args.dmax + 1):
            for k in range(d + 1):
                lines.append("%d,%d,%d,%d" % (d, k, d - k, monogenic_dim(ctx, d - k)))
        _emit("\n".join(lines) + "\n", args.output)
    return 0


def cmd_intertwiner(args):
    ctx = _context(args)
    try:
        if args.kind == "dirac":
            op = dirac_power(args.a, ctx)
        else:
            op = twistor(args.a, ctx)
    except ValueError as exc:
        return _fail(str(exc))
    test_degree = max(args.test_degree, op.order)
    report = verify_intertwining(op, test_degree, ctx)
    payload = op.to_json()
    payload["test_degree"] = test_degree
    payload["verification"] = report.to_json()
    payload["residual_zero"] = report.residual_zero
    _emit(_json_dump(payload), args.output)
    return 0 if report.residual_zero else 2


# ---------------------------------------------------------------------------
# selftest
# ---------------------------------------------------------------------------


def _selftest_checks():
    """Bounded invariant suite; each yielded callable raises on failure."""
    from .exact import (GaussianRational, SparseMatrix, nullspace, rref,
                        QI_ONE, QI_ZERO)
    from .clifford import Signature, build_gamma_rep, CliffordElement, blade_product
    from .polyspinor import SpinorPoly, assemble
    from .realization import (osp_generators, verma_action, function_action,
                              structure_constants, invariant_contractions,
                              contraction_eigenvalue, generators)
    from .fischer import monogenic_dim, apply_x_power
    from .singular import singular_vectors, singular_vectors_stacked

    def scalars():
        a = qi(rational(-3, 4), rational(1, 2))
        assert GaussianRational.from_string(a.to_string()) == a
        assert (a * a / a) == a
        m = SparseMatrix.from_dense([[qi(1), qi(0, 1)], [qi(0, -1), qi(1)]])
        red, piv = rref(m)
        assert piv == [0] and red.get(0, 1) == qi(0, 1)
        ker = nullspace(SparseMatrix.from_dense([[qi(1), qi(0, 1)]]))
        assert ker == [{0: qi(1), 1: qi(0, 1)}]

    def gamma_relations():
        for (p, q) in [(3, 0), (1, 2), (2, 2), (5, 0), (3, 3)]:
            rep = build_gamma_rep(Signature(p, q))
            N = rep.spinor_dim
            for i in range(1, rep.n + 1):
                for j in range(i, rep.n + 1):
                    anti = rep.gamma(i) @ rep.gamma(j) + rep.gamma(j) @ rep.gamma(i)
                    if i == j:
                        assert anti == SparseMatrix.identity(N, qi(-2 * rep.sig.eps(i)))
                    else:
                        assert anti.is_zero()

    def blades():
        sig = Signature(2, 2)
        rep = build_gamma_rep(sig)
        for b1 in range(16):
            for b2 in range(16):
                prod = blade_product(CliffordElement(4, {b1: QI_ONE}),
                                     CliffordElement(4, {b2: QI_ONE}), sig)
                assert rep.element_matrix(prod) == rep.blade_matrix(b1) @ rep.blade_matrix(b2)

    def osp_relations():
        for (p, q) in [(2, 1), (2, 2)]:
            ctx = Context(p, q)
            D, E, X = osp_generators(ctx.rep)
            mk = ctx.basis_maker(ctx.spinor_dim)
            for d in range(0, 4):
                Dd = assemble(D, d, mk).matrix
                Ed = assemble(E, d, mk).matrix
                Xd = assemble(X, d, mk).matrix
                lhs = assemble(E, d - 1, mk).matrix @ Dd - Dd @ Ed
                assert lhs == Dd.scale(-1)
                anti = assemble(D, d + 1, mk).matrix @ Xd + assemble(X, d - 1, mk).matrix @ Dd
                assert anti == Ed.scale(-2) - SparseMatrix.identity(Ed.rows).scale(ctx.n)
                assert assemble(E, d + 1, mk).matrix @ Xd - Xd @ Ed == Xd

    def brackets():
        ctx = Context(2, 1)
        lam = rational(2, 5)
        sc = structure_constants(ctx.sig)
        for picture in ("verma", "function"):
            act = {}
            for g in sc.gens:
                act[g] = (verma_action(g, lam, ctx.rep) if picture == "verma"
                          else function_action(g, lam, ctx.rep, module="dual-spinor"))
            mk = ctx.basis_maker(ctx.spinor_dim)
            for d in (0, 1, 2):
                for a in sc.gens:
                    for b in sc.gens:
                        sa = act[a].shifts(); sb = act[b].shifts()
                        sa = sa[0] if sa else 0
                        sb = sb[0] if sb else 0
                        lhs = assemble(act[a], d + sb, mk).matrix @ assemble(act[b], d, mk).matrix \
                            - assemble(act[b], d + sa, mk).matrix @ assemble(act[a], d, mk).matrix
                        rhs = SparseMatrix.zero(lhs.rows, lhs.cols)
                        for g2, c in sc.bracket(a, b):
                            rhs = rhs + assemble(act[g2], d, mk).matrix.scale(c)
                        assert lhs == rhs, (picture, a, b, d)

    def contractions():
        ctx = Context(3, 0)
        for lam in (rational(2), rational(-1, 3)):
            cons = invariant_contractions(lam, ctx.rep)
            mk = ctx.basis_maker(ctx.spinor_dim)
            for d in range(0, 5):
                for s, c in cons:
                    assert assemble(s, d, mk).matrix == assemble(c, d, mk).matrix

    def ladder():
        ctx = Context(2, 1)
        from .fischer import monogenic_basis as mb, dirac_matrix
        for m in (0, 1, 2):
            for k in range(0, 4):
                basis = mb(ctx, m)
                for el in basis.elements:
                    xk = apply_x_power(ctx, k, el)
                    img = ctx.graded_basis(m + k - 1).from_coordinates(
                        dirac_matrix(ctx, m + k).matrix.mul_vec(
                            ctx.graded_basis(m + k).coordinates(xk)))
                    scalar = qi(-k) if k % 2 == 0 else qi(-(2 * m + ctx.n + k - 1))
                    expect = apply_x_power(ctx, k - 1, el).scale(scalar) if k else \
                        SpinorPoly.zero(ctx.n, ctx.spinor_dim)
                    assert img == expect

    def fischer_rule():
        import math
        for (p, q) in [(3, 0), (2, 2)]:
            ctx = Context(p, q)
            for d in range(0, 5):
                total = sum(monogenic_dim(ctx, m) for m in range(d + 1))
                assert total == math.comb(d + ctx.n - 1, ctx.n - 1) * ctx.spinor_dim
        assert all(monogenic_dim(Context(4, 0), m) == monogenic_dim(Context(2, 2), m)
                   for m in range(4))

    def classification():
        ctx = Context(3, 0)
        rep = classify(ctx, rational(5, 2), 6)
        assert rep.match and rep.case == "twistor"
        labels = sorted(c.label() for c in rep.found)
        assert labels == [(0, 0, 0, 2), (2, 0, 2, 6)]
        assert classify(ctx, rational(1), 6).case == "dirac-power"
        assert classify(ctx, rational(1, 5), 4).case == "generic"
        a = singular_vectors(ctx, rational(3), 1)
        b = singular_vectors_stacked(ctx, rational(3), 1)
        assert [x.terms for x in a] == [x.terms for x in b]

    def intertwining():
        ctx = Context(2, 1)
        op = dirac_power(1, ctx)
        assert op.dirac_symbol_ratio == qi(1)
        assert verify_intertwining(op, 3, ctx).residual_zero
        assert not verify_intertwining(op, 2, ctx, source_offset=1).residual_zero
        deriv = next(iter(op.coefficients))
        assert not verify_intertwining(op.perturbed(deriv, 0, 0), 2, ctx).residual_zero
        top = twistor(1, ctx)
        assert verify_intertwining(top, 3, ctx).residual_zero

    return [
        ("exact scalars and kernels", scalars),
        ("gamma defining relations", gamma_relations),
        ("blade/gamma homomorphism", blades),
        ("osp(1|2) relations", osp_relations),
        ("representation brackets", brackets),
        ("contraction closed forms", contractions),
        ("monogenic ladder scalars", ladder),
        ("monogenic sum rule", fischer_rule),
        ("classification spot checks", classification),
        ("equivariant intertwining", intertwining),
    ]


def cmd_selftest(args):
    failures = 0
    for name, check in _selftest_checks():
        t0 = time.time()
        try:
            check()
        except AssertionError as exc:
            failures += 1
            print("FAIL %-28s %s" % (name, exc))
            continue
        suffix = " (%.1fs)" % (time.time() - t0) if args.verbose else ""
        print("PASS %-28s%s" % (name, suffix))
    if failures:
        print("%d check(s) failed" % failures)
        return 1
    print("all checks passed")
    return 0


def _prejoin(argv):
    """Glue values onto --lambda/--lambda-grid so leading '-' parses."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in ("--lambda", "--lambda-grid") and i + 1 < len(argv):
            out.append(tok + "=" + argv[i + 1])
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(_prejoin(sys.argv[1:] if argv is None else list(argv)))
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    handlers = {
        "classify": cmd_classify,
        "scan": cmd_scan,
        "fischer": cmd_fischer,
        "intertwiner": cmd_intertwiner,
        "selftest": cmd_selftest,
    }
    try:
        code = handlers[args.command](args)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else 1
    except ValueError as exc:
        code = _fail(str(exc))
    return code


if __name__ == "__main__":
    raise SystemExit(main())
