"""Command-line interface: ``dcomp <command> [options]``.

Structured output is JSON (compact with ``--output json``, indented with
the default ``--output pretty``); ``verify`` prints a table in pretty mode and
``bench`` writes CSV.  Exit status is 0 on success, 1 when a computation
fails (singular system, non-PSD input, failed check) and 2 on usage or
input-format errors.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import sys

import numpy as np
from numpy.linalg import LinAlgError

from . import entanglement as ent
from . import identities, solver
from .linalg import matrix_to_dict
from .multipliers import (
    EXPLICIT_J4,
    J_VARIANTS,
    RECURSIVE,
    build_I,
    build_J,
    check_multiplier_identities,
)
from .states import StateParams, bracket_norm, build_matrix, normalize, state_from_params


class UsageError(Exception):
    """Bad input file or option combination (exit status 2)."""


def _pair(z):
    z = complex(z)
    return [float(z.real), float(z.imag)]


def _load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc


def _load_params(path):
    try:
        return StateParams.from_dict(_load_json(path))
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{path}: invalid parameters ({exc})") from exc


def _load_vector(path):
    obj = _load_json(path)
    if isinstance(obj, dict):
        obj = obj.get("data")
    if not isinstance(obj, list):
        raise UsageError(f"{path}: expected a list of numbers or [re, im] pairs")
    try:
        return np.array(
            [complex(float(v[0]), float(v[1])) if isinstance(v, list) else complex(float(v)) for v in obj],
            dtype=np.complex128,
        )
    except (TypeError, ValueError, IndexError) as exc:
        raise UsageError(f"{path}: bad vector entry ({exc})") from exc


def _emit(args, obj):
    if args.output == "json":
        text = json.dumps(obj, separators=(",", ":"))
    else:
        text = json.dumps(obj, indent=2)
    args.stdout.write(text + "\n")


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------


def cmd_multiplier(args):
    M = build_I(args.m) if args.kind == "I" else build_J(args.m, args.variant)
    rep = check_multiplier_identities(M)
    out = {
        "kind": M.kind,
        "m": M.m,
        "variant": args.variant if M.kind == "J" else None,
        "matrix": matrix_to_dict(M.matrix),
        "identities": {
            "sigma": rep.sigma,
            "orthogonal": rep.orthogonal,
            "orthogonal_t": rep.orthogonal_t,
            "square": rep.square,
            "transpose": rep.transpose,
            "passed": rep.passed,
        },
    }
    _emit(args, out)
    return 0


def cmd_state(args):
    if args.action == "random":
        rng = np.random.default_rng(args.seed)
        p = StateParams.random(args.k, rng, args.family, args.variant)
        _emit(args, p.to_dict())
        return 0
    if args.params is None:
        raise UsageError(f"state {args.action} needs --params")
    p = _load_params(args.params)
    if args.action == "build":
        _emit(args, matrix_to_dict(build_matrix(p)))
    elif args.action == "bracket":
        bn = bracket_norm(p)
        _emit(args, {"bracket": _pair(bn.bracket), "norm_sq": bn.norm_sq})
    else:
        _emit(args, normalize(p).to_dict())
    return 0


def cmd_verify(args):
    families = ("J", "I") if args.family == "both" else (args.family,)
    variants = J_VARIANTS if args.variant == "all" else (args.variant,)
    reports = identities.verify_family_suite(
        args.kmax, args.draws, args.seed, families, variants, k_min=args.kmin
    )
    rows = identities.summarize(reports)
    ok = all(r.passed for r in rows if r.gated)
    if args.output == "pretty":
        args.stdout.write(identities.format_table(rows) + "\n")
        args.stdout.write(("all gated checks passed" if ok else "gated check FAILED") + "\n")
    else:
        _emit(args, {"passed": ok, "rows": [r.to_dict() for r in rows]})
    return 0 if ok else 1


def cmd_concurrence(args):
    p = normalize(_load_params(args.params))
    d = ent.concurrence_pure(p)
    out = {"d": d, "E": ent.eof_from_concurrence(min(d, 1.0), 2**p.k)}
    if args.pform:
        P = ent.build_p(p.k, p.family, p.j_variant)
        out["d_pform"] = ent.concurrence_pform(state_from_params(p), P)
    _emit(args, out)
    return 0


def cmd_eof(args):
    p = normalize(_load_params(args.params))
    d = ent.concurrence_pure(p)
    out = {
        "d": d,
        "E": ent.eof_from_concurrence(min(d, 1.0), 2**p.k),
        "E_spectral": ent.eof_spectral(state_from_params(p)),
    }
    _emit(args, out)
    return 0


def _load_ensemble(path):
    obj = _load_json(path)
    try:
        k = int(obj["k"])
        members, family, variant = [], None, None
        for m in obj["members"]:
            p = StateParams.from_dict(m["params"])
            if p.k != k:
                raise ValueError(f"member has level {p.k}, ensemble declares {k}")
            family, variant = p.family, p.j_variant
            members.append((float(m["p"]), state_from_params(p)))
        return k, ent.Ensemble(tuple(members)), family, variant
    except (KeyError, TypeError) as exc:
        raise UsageError(f"{path}: invalid ensemble ({exc})") from exc


def cmd_mixed(args):
    k, ens, family, variant = _load_ensemble(args.ensemble)
    rho = ent.assemble_density(ens)
    P = ent.build_p(k, family, variant)
    res = ent.mixed_concurrence(rho, P, args.route, allow_large=args.allow_large)
    _emit(args, {"d": res.d, "E": res.E, "omegas": [float(w) for w in res.omegas]})
    return 0


def cmd_pmatrix(args):
    if args.legacy:
        P = ent.build_p_legacy16(literal=args.literal)
    else:
        if args.k is None:
            raise UsageError("pmatrix needs --k unless --legacy is given")
        P = ent.build_p(args.k, args.family, args.variant, args.rule)
    _emit(args, matrix_to_dict(P))
    return 0


def cmd_solve(args):
    p = _load_params(args.params)
    y = _load_vector(args.y)
    system = solver.StructuredSystem.from_params(p)
    x = system.solve(y, args.form)
    M = system.matrix(args.form)
    residual = float(np.linalg.norm(M @ x - y) / max(np.linalg.norm(y), np.finfo(float).tiny))
    _emit(args, {"form": args.form, "x": [_pair(v) for v in x], "residual": residual})
    return 0


def cmd_bench(args):
    try:
        klist = [int(s) for s in args.klist.split(",") if s.strip()]
    except ValueError as exc:
        raise UsageError(f"--klist must be comma-separated integers ({exc})") from exc
    records = solver.bench_solve(klist, args.reps, args.seed)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            solver.write_bench_csv(records, fh)
    else:
        solver.write_bench_csv(records, args.stdout)
    return 0


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------


def build_parser():
    ap = argparse.ArgumentParser(prog="dcomp", description="d-computable matrices and their entanglement")
    ap.add_argument("--output", choices=("json", "pretty"), default="pretty")
    # also accepted after the subcommand; SUPPRESS keeps the global value otherwise
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", choices=("json", "pretty"), default=argparse.SUPPRESS)
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("multiplier", parents=[common], help="build a J or I multiplier and check its identities")
    sp.add_argument("--kind", choices=("J", "I"), default="J")
    sp.add_argument("--m", type=int, required=True, help="size is 2^m")
    sp.add_argument("--variant", choices=J_VARIANTS, default=RECURSIVE)
    sp.set_defaults(func=cmd_multiplier)

    sp = sub.add_parser("state", parents=[common], help="build, inspect or normalize a parameter set")
    sp.add_argument("action", choices=("build", "bracket", "normalize", "random"))
    sp.add_argument("--params")
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--family", choices=("J", "I"), default="J")
    sp.add_argument("--variant", choices=J_VARIANTS, default=EXPLICIT_J4)
    sp.set_defaults(func=cmd_state)

    sp = sub.add_parser("verify", parents=[common], help="run the identity suite on seeded random draws")
    sp.add_argument("--family", choices=("J", "I", "both"), default="J")
    sp.add_argument("--variant", choices=(*J_VARIANTS, "all"), default=EXPLICIT_J4)
    sp.add_argument("--kmin", type=int, default=1)
    sp.add_argument("--kmax", type=int, required=True)
    sp.add_argument("--draws", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.set_defaults(func=cmd_verify)

    for name, func, text in (
        ("concurrence", cmd_concurrence, "generalized concurrence of a pure family state"),
        ("eof", cmd_eof, "entanglement of formation of a pure family state"),
    ):
        sp = sub.add_parser(name, parents=[common], help=text)
        sp.add_argument("--params", required=True)
        if name == "concurrence":
            sp.add_argument("--pform", action="store_true", help="also evaluate |<psi|p psi*>|")
        sp.set_defaults(func=func)

    sp = sub.add_parser("mixed", parents=[common], help="concurrence and EoF of an ensemble's density matrix")
    sp.add_argument("--ensemble", required=True)
    sp.add_argument("--route", choices=("hermitian", "direct"), default="hermitian")
    sp.add_argument("--allow-large", action="store_true", help=f"permit k > {ent.MAX_MIXED_LEVEL}")
    sp.set_defaults(func=cmd_mixed)

    sp = sub.add_parser("pmatrix", parents=[common], help="emit the concurrence sign matrix p")
    sp.add_argument("--k", type=int)
    sp.add_argument("--legacy", action="store_true", help="the 16x16 matrix of the legacy family")
    sp.add_argument("--literal", action="store_true", help="legacy entries on the diagonal as usually printed")
    sp.add_argument("--rule", choices=("derived", "row-formula"), default="derived")
    sp.add_argument("--family", choices=("J", "I"), default="J")
    sp.add_argument("--variant", choices=J_VARIANTS, default=EXPLICIT_J4)
    sp.set_defaults(func=cmd_pmatrix)

    sp = sub.add_parser("solve", parents=[common], help="structured solve with a J-family matrix")
    sp.add_argument("--params", required=True)
    sp.add_argument("--y", required=True)
    sp.add_argument("--form", choices=[f.value for f in solver.SolveForm], default="A")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("bench", parents=[common], help="time structured solves against LU")
    sp.add_argument("--klist", required=True)
    sp.add_argument("--reps", type=int, default=3)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_bench)
    return ap


def run(argv=None, stdout=None, stderr=None):
    """Parse ``argv`` and execute; returns the exit status."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args.stdout = stdout
    if args.command == "state" and args.action == "random" and args.seed is None:
        stderr.write("dcomp: state random needs --seed\n")
        return 2
    try:
        return args.func(args)
    except UsageError as exc:
        stderr.write(f"dcomp: {exc}\n")
        return 2
    except (ValueError, LinAlgError) as exc:
        stderr.write(f"dcomp: error: {exc}\n")
        return 1


def main(argv=None):
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
