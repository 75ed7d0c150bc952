"""Command line front end for the descent pipeline.

Commands: torsion, quadrics, algebra, rho-from-point, trivialize,
descend, verify.  Exit codes: 1 for I/O and parse problems, 2 for
failed mathematical preconditions, 3 for certification failures.
"""

import argparse
import random
import sys

from . import serialize as ser
from .fields import ReducibleExtension
from .curve import TorsionNotRational, torsion_table
from .descent_funcs import (compute_miller_table, compute_epsilon,
                            compute_G_basis, compute_embedding, affine_sample,
                            DegenerateSample, EigenspaceDimensionError)
from .algebra import (RhoTable, validate_rho, rho_from_point, build_csa,
                      trivialize, certify_trivialisation,
                      CertificationFailed, BadBasePoint)
from .geometry import (quadrics_for_C, descend, g_eval, lambda_eval,
                       extract_point, RankNotOne, KernelEmpty, KernelTooBig)


def _load_curve(args):
    return ser.curve_from_json(ser.load(args.curve))


def _load_rho(path, table):
    """A rho table from either a rho file or an algebra file."""
    j = ser.load(path)
    if j.get("kind") == "csa":
        values = ser.csa_from_json(j, table).rho.values
    else:
        values = ser.rho_from_json(j, table).values
    return validate_rho(table, values)


def cmd_torsion(args):
    curve = _load_curve(args)
    try:
        table = torsion_table(curve, args.n)
    except TorsionNotRational as e:
        print("error: found %d of %d torsion points over the base field"
              % (e.count, args.n * args.n), file=sys.stderr)
        return 2
    ser.save(args.out, ser.torsion_to_json(table))
    print("%d torsion points -> %s" % (len(table), args.out))
    return 0


def cmd_quadrics(args):
    curve = _load_curve(args)
    table = torsion_table(curve, args.n)
    rho = _load_rho(args.rho, table) if args.rho else RhoTable.trivial(table)
    qs = quadrics_for_C(curve, table, rho)
    ser.save(args.out, ser.quadrics_to_json(qs, curve, rho))
    print("%d independent quadrics -> %s" % (len(qs), args.out))
    return 0


def cmd_algebra(args):
    curve = _load_curve(args)
    table = torsion_table(curve, args.n)
    rho = _load_rho(args.rho, table)
    eps = compute_epsilon(table)
    csa = build_csa(table, eps, rho)
    ser.save(args.out, ser.csa_to_json(csa))
    print("certified algebra -> %s" % args.out)
    return 0


def cmd_rho_from_point(args):
    curve = _load_curve(args)
    table = torsion_table(curve, args.n)
    q = ser.point_file_from_json(ser.load(args.point), curve)
    rho = rho_from_point(table, q)
    ser.save(args.out, ser.rho_to_json(rho))
    print("validated rho from base point -> %s" % args.out)
    return 0


def cmd_trivialize(args):
    curve = _load_curve(args)
    table = torsion_table(curve, args.n)
    rho = _load_rho(args.rho, table)
    millers = compute_miller_table(table)
    eps = compute_epsilon(table, millers)
    emb = compute_embedding(table, eps, millers, seed=args.seed)
    matrices = gamma = None
    if args.mode == "user":
        if not args.triv:
            raise ser.ParseError("user mode needs --triv with the matrices")
        user = ser.triv_from_json(ser.load(args.triv), table)
        matrices, gamma = user.matrices, user.gamma
    triv = trivialize(emb, eps, rho, mode=args.mode, matrices=matrices, gamma=gamma)
    ser.save(args.out, ser.triv_to_json(triv))
    print("certified %s trivialisation -> %s" % (args.mode, args.out))
    return 0


def cmd_descend(args):
    curve = _load_curve(args)
    table = torsion_table(curve, args.n)
    rho = _load_rho(args.rho, table)
    triv = ser.triv_from_json(ser.load(args.triv), table)
    out = descend(curve, args.n, rho, triv, seed=args.seed)
    ser.save(args.out, ser.descent_to_json(out, curve))
    print("%s -> %s" % (out["report"]["summary"], args.out))
    return 0


class _Context:
    """Lazily shared torsion/pairing data for verify."""

    def __init__(self, curve, n):
        self.curve = curve
        self.n = n
        self._table = None
        self._eps = None

    def table(self):
        if self._table is None:
            self._table = torsion_table(self.curve, self.n)
        return self._table

    def eps(self):
        if self._eps is None:
            self._eps = compute_epsilon(self.table())
        return self._eps


def _verify_file(path, j, ctx, emit):
    kind = j.get("kind")
    curve = ctx.curve
    if kind == "curve":
        ser.curve_from_json(j)
        emit(path, "curve parses and matches its hash", True)
    elif kind == "point":
        ser.point_file_from_json(j, curve)
        emit(path, "point lies on the curve", True)
    elif kind == "torsion":
        table = ser.torsion_from_json(j, curve)
        ok = (ctx.n * table.t1).is_infinity and (ctx.n * table.t2).is_infinity
        emit(path, "basis points are n-torsion", ok)
    elif kind == "rho":
        try:
            validate_rho(ctx.table(), ser.rho_from_json(j, ctx.table()).values)
            emit(path, "rho is a symmetric cocycle", True)
        except CertificationFailed as e:
            emit(path, "rho is a symmetric cocycle", False, e.witness)
    elif kind == "csa":
        csa = ser.csa_from_json(j, ctx.table())
        try:
            rebuilt = build_csa(ctx.table(), ctx.eps(), csa.rho)
            ok = rebuilt.structure == csa.structure
            emit(path, "structure constants certify and match", ok)
        except CertificationFailed as e:
            emit(path, "structure constants certify and match", False, e.witness)
    elif kind == "trivialisation":
        triv = ser.triv_from_json(j, ctx.table())
        try:
            certify_trivialisation(triv, ctx.eps())
            emit(path, "trivialisation certifies", True)
        except CertificationFailed as e:
            emit(path, "trivialisation certifies", False, e.witness)
    elif kind == "quadrics":
        qs = ser.quadrics_from_json(j, curve)
        rho = ser.quadrics_rho_from_json(j, ctx.table())
        want = ctx.n ** 2 * (ctx.n ** 2 - 3) // 2
        emit(path, "quadric count", len(qs) == want, len(qs))
        emit(path, "quadric rank", qs.rank() == want, qs.rank())
        rebuilt = quadrics_for_C(curve, ctx.table(), rho)
        emit(path, "quadrics match recomputation", qs == rebuilt)
    elif kind == "descent":
        _verify_descent(path, j, ctx, emit)
    else:
        raise ser.ParseError("unknown artifact kind %r" % kind)


def _verify_descent(path, j, ctx, emit):
    out = ser.descent_from_json(j, ctx.curve)
    n, curve, table = ctx.n, ctx.curve, ctx.table()
    qs, csa, triv, gamma = (out["quadrics"], out["csa"],
                            out["trivialisation"], out["gamma"])
    cubic = out["plane_curve"]
    try:
        rho = validate_rho(table, triv.rho.values)
        emit(path, "rho is a symmetric cocycle", True)
    except CertificationFailed as e:
        emit(path, "rho is a symmetric cocycle", False, e.witness)
        return
    want = n ** 2 * (n ** 2 - 3) // 2
    emit(path, "quadric count and rank", len(qs) == want and qs.rank() == want)
    emit(path, "quadrics match recomputation",
         qs == quadrics_for_C(curve, table, rho))
    try:
        rebuilt = build_csa(table, ctx.eps(), rho)
        emit(path, "algebra certifies and matches", rebuilt.structure == csa.structure)
    except CertificationFailed as e:
        emit(path, "algebra certifies and matches", False, e.witness)
    try:
        certify_trivialisation(triv, ctx.eps())
        emit(path, "trivialisation certifies", True)
    except CertificationFailed as e:
        emit(path, "trivialisation certifies", False, e.witness)
        return
    L = next(iter(gamma.values())).tower
    cob = True
    for a in gamma:
        for b in gamma:
            ab = table.add_index(a, b)
            if not (gamma[a] * gamma[b] / gamma[ab] == rho.value(a, b).lift_to(L)):
                cob = False
    emit(path, "gamma is a coboundary for rho", cob)
    lead = next((c for c in cubic.coeffs if not c.is_zero()), None)
    emit(path, "plane cubic is nonzero and normalized",
         lead is not None and lead == 1)
    # fresh samples: the stored gamma and trivialisation must keep
    # producing points of the stored cubic
    gbasis = compute_G_basis(table, ctx.eps())
    cx = curve if L == curve.field else curve.base_change(L)
    rng = random.Random(j["seed"] + 1)
    used = set()
    fresh = True
    for k in range(3):
        p = affine_sample(cx, n, rng, "v%d" % k, used)
        z = g_eval(curve, gbasis, gamma, p)
        if not all(v.is_zero() for v in qs.evaluate_all(z)):
            fresh = False
            break
        try:
            m = lambda_eval(triv, rho, gamma, p, gbasis)
        except RankNotOne:
            fresh = False
            break
        col, _ = extract_point(m)
        if not cubic.evaluate(col).is_zero():
            fresh = False
            break
    emit(path, "fresh samples land on the stored cubic", fresh)


def cmd_verify(args):
    curve = _load_curve(args)
    ctx = _Context(curve, args.n)
    failures = []

    def emit(path, name, ok, detail=None):
        tag = "PASS" if ok else "FAIL"
        extra = "" if detail is None else " (%r)" % (detail,)
        print("%s %s: %s%s" % (tag, path, name, extra))
        if not ok:
            failures.append((path, name))

    for path in args.files:
        _verify_file(path, ser.load(path), ctx, emit)
    if failures:
        print("%d check(s) failed" % len(failures))
        return 3
    print("all checks pass")
    return 0


def main(argv=None):
    ap = argparse.ArgumentParser(
        prog="ndescent",
        description="Exact descent pipeline: torsion, coverings, "
                    "obstruction algebras, and plane equations.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, out=True):
        p.add_argument("--curve", required=True, help="curve artifact file")
        p.add_argument("--n", type=int, default=3)
        p.add_argument("--seed", type=int, default=0)
        if out:
            p.add_argument("--out", required=True, help="output artifact file")

    p = sub.add_parser("torsion", help="enumerate the rational n-torsion")
    common(p)
    p.set_defaults(func=cmd_torsion)

    p = sub.add_parser("quadrics", help="quadrics for the (twisted) covering")
    common(p)
    p.add_argument("--rho", help="rho or algebra file; omitted means trivial")
    p.set_defaults(func=cmd_quadrics)

    p = sub.add_parser("algebra", help="structure constants of the twisted algebra")
    common(p)
    p.add_argument("--rho", required=True)
    p.set_defaults(func=cmd_algebra)

    p = sub.add_parser("rho-from-point", help="the twist attached to a base point")
    common(p)
    p.add_argument("--point", required=True, help="point artifact file")
    p.set_defaults(func=cmd_rho_from_point)

    p = sub.add_parser("trivialize", help="build and certify a trivialisation")
    common(p)
    p.add_argument("--rho", required=True)
    p.add_argument("--mode", default="standard",
                   choices=["standard", "gamma", "user"])
    p.add_argument("--triv", help="matrices file for user mode")
    p.set_defaults(func=cmd_trivialize)

    p = sub.add_parser("descend", help="full pipeline to a plane curve")
    common(p)
    p.add_argument("--rho", required=True)
    p.add_argument("--triv", required=True)
    p.set_defaults(func=cmd_descend)

    p = sub.add_parser("verify", help="re-run all checks on artifact files")
    common(p, out=False)
    p.add_argument("files", nargs="+")
    p.set_defaults(func=cmd_verify)

    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ser.ParseError) as e:
        print("error: %s" % e, file=sys.stderr)
        return 1
    except (TorsionNotRational, BadBasePoint, DegenerateSample,
            ReducibleExtension, ValueError) as e:
        print("error: %s" % e, file=sys.stderr)
        return 2
    except (CertificationFailed, RankNotOne, KernelEmpty, KernelTooBig,
            EigenspaceDimensionError) as e:
        print("error: %s" % e, file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
