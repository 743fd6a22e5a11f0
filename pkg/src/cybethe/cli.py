"""Command-line front end.

Subcommands: fold, validate, verify, generate, populate, typea analyze,
typea flow, eigenvalues, lambda0, check-numeric.  Inputs are JSON
documents (instances, tuples); outputs are JSON on stdout or --out.  Exit
codes: 0 all requested checks pass, 1 a check failed, 2 input error,
3 internal invariant violation.
"""

import argparse
import json
import sys

from . import serialize
from .cartan import orbit_data
from .errors import (CybetheError, InputError, InternalInvariantError)
from .frame import (canonical_lambda0, eigenvalues, is_critical_exact,
                    is_cyclotomic_tuple, is_generic, validate_lambda0,
                    weight_at_infinity)
from .genengine import cyclotomic_generate, explore_population
from .numerics import Tolerances, embed, grad_check, residuals
from .typea import (apply_flow, beta, cyclotomic_population,
                    flow_vs_generation, frame_conditions_check, gram_matrix,
                    is_cyclotomically_self_dual, isotropy_check, kernel_basis,
                    witt_basis)


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}")


def _emit(doc, out_path):
    text = json.dumps(doc, indent=2, sort_keys=True)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _instance(args):
    return serialize.instance_from_doc(_load_json(args.instance))


def _tuple(args, inst):
    return serialize.tuple_from_doc(_load_json(args.tuple), inst.M)


def _parse_samples(text, order):
    return [serialize.parse_scalar(chunk, order)
            for chunk in text.split(",") if chunk.strip()]


def cmd_fold(args):
    cartan = serialize.cartan_from_doc(
        args.cartan if not args.cartan.startswith("{")
        else json.loads(args.cartan))
    aut = serialize.perm_from_doc(args.sigma, cartan.n)
    fold = orbit_data(cartan, aut)
    doc = {
        "reps": [r + 1 for r in fold.reps],
        "orbit_len": list(fold.orbit_len),
        "linking": list(fold.linking),
        "a_fold": [list(row) for row in fold.a_fold.a],
        "d_fold": list(fold.a_fold.d),
        "orbits": [[i + 1 for i in orbit] for orbit in fold.orbits],
    }
    _emit(doc, args.out)
    return 0


def cmd_validate(args):
    inst = _instance(args)
    fold = orbit_data(inst.cartan, inst.aut)
    ok, violations = validate_lambda0(inst, fold, typea_p=args.p)
    _emit({"ok": ok, "violations": violations}, args.out)
    return 0 if ok else 1


def cmd_verify(args):
    inst = _instance(args)
    y = _tuple(args, inst)
    ok_g, witness = is_generic(inst, y)
    report = {"generic": ok_g, "witness": witness}
    if ok_g:
        crit, _ = is_critical_exact(inst, y)
        report["critical"] = crit
    else:
        report["critical"] = False
    report["cyclotomic"] = is_cyclotomic_tuple(inst, y)
    report["lambda_infinity"] = serialize.weight_doc(
        weight_at_infinity(inst, y))
    _emit(report, args.out)
    return 0 if (report["generic"] and report["critical"]
                 and report["cyclotomic"]) else 1


def cmd_generate(args):
    inst = _instance(args)
    y = _tuple(args, inst)
    fold = orbit_data(inst.cartan, inst.aut)
    c = serialize.parse_scalar(args.c, inst.M)
    out, step = cyclotomic_generate(inst, fold, y, args.direction - 1, c)
    doc = {
        "tuple": serialize.tuple_doc(out),
        "direction": args.direction,
        "c": serialize.scalar_str(step.c),
        "kind": step.kind,
        "lambda_infinity": serialize.weight_doc(weight_at_infinity(inst, out)),
        "intermediates": {name: serialize.qpoly_doc(p)
                          for name, p in step.intermediates},
    }
    _emit(doc, args.out)
    return 0


def cmd_populate(args):
    inst = _instance(args)
    seed = _tuple(args, inst)
    fold = orbit_data(inst.cartan, inst.aut)
    samples = _parse_samples(args.samples, inst.M)
    graph = explore_population(inst, fold, seed, args.depth, samples)
    _emit(serialize.catalog_doc(graph), args.out)
    return 0


def cmd_typea_analyze(args):
    inst = _instance(args)
    y = _tuple(args, inst)
    space, flag = kernel_basis(inst, y)
    report = frame_conditions_check(space)
    self_dual = is_cyclotomically_self_dual(space)
    doc = serialize.space_doc(space)
    doc["frame_report"] = _plain(report)
    doc["self_dual"] = self_dual
    doc["beta_roundtrip"] = [serialize.qpoly_doc(q)
                             for q in beta(space, flag.adjusted)]
    if self_dual:
        wb = witt_basis(space, adjusted=flag.adjusted,
                        quadratic_extension=args.quadratic_extension)
        doc["witt"] = {
            "vectors": [serialize.qpoly_doc(v) for v in wb.vectors],
            "constants": [serialize.scalar_str(c) for c in wb.constants],
            "gram": [[serialize.scalar_str(x) for x in row]
                     for row in wb.gram],
        }
        doc["flag_isotropic"] = isotropy_check(
            space, list(wb.vectors), gram=[list(r) for r in wb.gram])
        g = gram_matrix(space, list(space.basis))
        doc["b_matrix_special_basis"] = [
            [serialize.scalar_str(x) for x in row] for row in g]
    if args.members:
        pop = cyclotomic_population(inst, y, sample_count=args.members,
                                    rng_seed=args.seed)
        doc["population"] = {
            "dims": pop["dims"],
            "components": pop["components"],
            "members": [serialize.tuple_doc(m) for m in pop["members"]],
        }
    _emit(doc, args.out)
    return 0 if (report["ok"] and self_dual) else 1


def cmd_typea_flow(args):
    inst = _instance(args)
    y = _tuple(args, inst)
    fold = orbit_data(inst.cartan, inst.aut)
    params = _parse_samples(args.c, inst.M)
    if args.generator == "X":
        res = flow_vs_generation(inst, fold, y, args.k, params)
        doc = {"generator": f"X_{args.k}",
               "rho": serialize.scalar_str(res["rho"]),
               "all_match": res["all_match"],
               "matches": res["matches"]}
        _emit(doc, args.out)
        return 0 if res["all_match"] else 1
    # Y/Z generators have no generation counterpart; apply and report
    space, flag = kernel_basis(inst, y)
    wb = witt_basis(space, adjusted=flag.adjusted)
    doc = {"generator": f"{args.generator}_{args.k}", "tuples": []}
    for c in params:
        _, tup = apply_flow(space, wb, (args.generator, args.k), c)
        doc["tuples"].append({
            "c": serialize.scalar_str(c),
            "tuple": [serialize.qpoly_doc(q.monic()) for q in tup],
        })
    _emit(doc, args.out)
    return 0


def cmd_eigenvalues(args):
    inst = _instance(args)
    y = _tuple(args, inst)
    res = eigenvalues(inst, y)
    doc = {
        "cyclotomic": [serialize.scalar_str(e) for e in res["cyclotomic"]],
        "extended": [serialize.scalar_str(e) for e in res["extended"]],
        "match": res["match"],
        "origin_zero": res["origin_zero"],
        "not_critical": res["not_critical"],
    }
    _emit(doc, args.out)
    return 0 if res["match"] and not res["not_critical"] else 1


def cmd_lambda0(args):
    weight = canonical_lambda0(args.rank, args.M)
    _emit({"lambda0": serialize.weight_doc(weight)}, args.out)
    return 0


def cmd_check_numeric(args):
    inst = _instance(args)
    y = _tuple(args, inst)
    overrides = {}
    if args.h:
        overrides["fd_step"] = args.h
    if args.tol:
        overrides["root_residual"] = args.tol
    tol = Tolerances(**overrides)
    point = embed(y, tol)
    per_root = residuals(inst, point, tol) if point.roots else []
    norm = max((abs(r) for r in per_root), default=0.0)
    grad = grad_check(inst, point, tol=tol)
    doc = {
        "max_residual": norm,
        "per_root": [{"root": [z.real, z.imag], "colour": c + 1,
                      "residual": abs(r)}
                     for z, c, r in zip(point.roots, point.colours,
                                        per_root)],
        "gradient_mismatch": grad["max_mismatch"],
        "max_gradient": grad["max_gradient"],
    }
    _emit(doc, args.out)
    ok = norm < tol.root_residual and grad["max_mismatch"] < tol.fd_tol
    return 0 if ok else 1


def _plain(obj):
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (int, float, bool, str)) or obj is None:
        return obj
    return str(obj)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="cybethe",
        description="Exact cyclotomic Bethe critical points: folding, "
                    "generation, population catalogs, type-A flag theory, "
                    "and numeric cross-checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fold", help="fold Cartan data along an automorphism")
    p.add_argument("--cartan", required=True,
                   help='series tag like "A4" or inline JSON matrix doc')
    p.add_argument("--sigma", required=True,
                   help='cycles "(1 4)(2 3)" or JSON 1-based image array')
    p.add_argument("--out")
    p.set_defaults(func=cmd_fold)

    p = sub.add_parser("validate", help="check the weight at the origin")
    p.add_argument("--instance", required=True)
    p.add_argument("--p", type=int, default=None,
                   help="also check the type-A conditions for this p")
    p.add_argument("--out")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("verify",
                       help="genericity / cyclotomy / criticality report")
    p.add_argument("--instance", required=True)
    p.add_argument("--tuple", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("generate", help="one cyclotomic generation step")
    p.add_argument("--instance", required=True)
    p.add_argument("--tuple", required=True)
    p.add_argument("--direction", type=int, required=True,
                   help="orbit representative, 1-based")
    p.add_argument("--c", required=True, help="parameter (exact scalar)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("populate", help="bounded BFS population catalog")
    p.add_argument("--instance", required=True)
    p.add_argument("--tuple", required=True)
    p.add_argument("--depth", type=int, default=1)
    p.add_argument("--samples", default="1/3,1,-1/2,2",
                   help="comma-separated exact parameters")
    p.add_argument("--out")
    p.set_defaults(func=cmd_populate)

    p_typea = sub.add_parser("typea", help="type-A flag theory")
    sub_a = p_typea.add_subparsers(dest="typea_command", required=True)

    p = sub_a.add_parser("analyze",
                         help="kernel space, frame checks, B matrix, Witt")
    p.add_argument("--instance", required=True)
    p.add_argument("--tuple", required=True)
    p.add_argument("--quadratic-extension", action="store_true")
    p.add_argument("--members", type=int, default=0,
                   help="also emit this many sampled population members")
    p.add_argument("--seed", type=int, default=0,
                   help="sampler seed for --members")
    p.add_argument("--out")
    p.set_defaults(func=cmd_typea_analyze)

    p = sub_a.add_parser("flow",
                         help="apply a flag flow; X flows are cross-checked "
                              "against cyclotomic generation")
    p.add_argument("--instance", required=True)
    p.add_argument("--tuple", required=True)
    p.add_argument("--generator", choices=("X", "Y", "Z"), default="X")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--c", default="1,2,1/2,-1,3",
                   help="comma-separated parameters")
    p.add_argument("--out")
    p.set_defaults(func=cmd_typea_flow)

    p = sub.add_parser("eigenvalues", help="exact Gaudin eigenvalue tables")
    p.add_argument("--instance", required=True)
    p.add_argument("--tuple", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_eigenvalues)

    p = sub.add_parser("lambda0",
                       help="canonical type-A weight at the origin")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--M", type=int, default=2)
    p.add_argument("--out")
    p.set_defaults(func=cmd_lambda0)

    p = sub.add_parser("check-numeric",
                       help="embed roots, residual and gradient report")
    p.add_argument("--instance", required=True)
    p.add_argument("--tuple", required=True)
    p.add_argument("--h", type=float, default=None,
                   help="finite-difference step")
    p.add_argument("--tol", type=float, default=None,
                   help="override residual tolerance")
    p.add_argument("--out")
    p.set_defaults(func=cmd_check_numeric)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        _emit({"error": {"kind": type(exc).__name__, "message": str(exc),
                         **exc.payload}}, None)
        return 2
    except InternalInvariantError as exc:
        _emit({"error": {"kind": type(exc).__name__, "message": str(exc),
                         **exc.payload}}, None)
        return 3
    except CybetheError as exc:
        _emit({"error": {"kind": type(exc).__name__, "message": str(exc),
                         **exc.payload}}, None)
        return 2


if __name__ == "__main__":
    sys.exit(main())
