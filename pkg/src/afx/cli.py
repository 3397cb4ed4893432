"""Command-line front end: ``afx <subcommand> ...``.

Exit codes: 0 success, 1 malformed input (with a line/column diagnostic),
2 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .errors import InputError, InvariantViolation
from .ratgeo import ScaledRational, fmt_rational, frac


class _Out:
    def __init__(self, decimal: bool):
        self.decimal = decimal

    def num(self, x) -> str:
        if isinstance(x, Fraction):
            x = ScaledRational(x)
        s = str(x)
        if self.decimal and not (isinstance(x, ScaledRational) and x.is_rational() and x.q.denominator == 1):
            s += f"  [≈ {float(x):.6g}, inexact]"
        return s


def _load_json(path: str):
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}", 1, 1) from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: {e.msg}", e.lineno, e.colno) from None


def _polytope(data, path: str):
    from .polytope import polytope_from_json

    try:
        return polytope_from_json(data)
    except (ValueError, TypeError, ZeroDivisionError) as e:
        raise InputError(f"{path}: {e}", 1, 1) from None


def _bodies(path: str) -> list:
    """A collection file: a list of polytopes or {"bodies": [...]}; a single polytope is allowed."""
    data = _load_json(path)
    if isinstance(data, dict) and "bodies" in data:
        data = data["bodies"]
    if isinstance(data, dict):
        return [_polytope(data, path)]
    if not isinstance(data, list) or not data:
        raise InputError(f"{path}: expected a polytope, a list of polytopes or {{\"bodies\": [...]}}", 1, 1)
    bodies = [_polytope(d, path) for d in data]
    if len({C.ambient_dim for C in bodies}) != 1:
        raise InputError(f"{path}: bodies live in different dimensions", 1, 1)
    return bodies


def _gather(paths: Sequence[str]) -> list:
    out = []
    for p in paths:
        out += _bodies(p)
    return out


def _fmt_set(s) -> str:
    return "{" + ", ".join(str(i) for i in sorted(s)) + "}"


def _fmt_vec(v) -> str:
    return "(" + ", ".join(fmt_rational(x) for x in v) + ")"


# ---------------------------------------------------------------------------
# subcommands


def cmd_mixedvol(args, out: _Out) -> int:
    from .mixedvol import mixed_volume

    bodies = _gather(args.files)
    n = bodies[0].ambient_dim
    if len(bodies) != n:
        raise InputError(f"need {n} bodies in R^{n}, got {len(bodies)}", 1, 1)
    v = mixed_volume(bodies)
    print(json.dumps({"mixed_volume": v.to_json()}) if args.json else out.num(v))
    return 0


def cmd_areameasure(args, out: _Out) -> int:
    from .mixedvol import mixed_area_measure

    bodies = _gather(args.files)
    n = bodies[0].ambient_dim
    if len(bodies) != n - 1:
        raise InputError(f"need {n - 1} bodies in R^{n}, got {len(bodies)}", 1, 1)
    mu = mixed_area_measure(bodies)
    if args.json:
        print(json.dumps(mu.to_json()))
        return 0
    if mu.is_zero():
        print("zero measure")
    for a in mu.atoms:
        print(f"{_fmt_vec(a.normal)}  {out.num(a.weight)}")
    return 0


def cmd_classify(args, out: _Out) -> int:
    from .criticality import classify

    rep = classify(_bodies(args.file))
    if args.json:
        print(json.dumps(rep.to_json()))
        return 0
    print(f"class={rep.cls.value}")
    if rep.eta:
        print(f"eta = {_fmt_set(rep.eta)}, dim L_eta = {rep.L_eta.dim}")
    for b, L in zip(rep.maximal_sets, rep.L_j):
        print(f"maximal critical set {_fmt_set(b)}, dim L = {L.dim}")
    return 0


def cmd_extremal(args, out: _Out) -> int:
    from .extremals import extremal_space, extremality_test
    from .mixedvol import SupportDifference

    bodies = _bodies(args.file)
    try:
        space = extremal_space(bodies, seed=args.seed)
    except ValueError as e:
        raise InputError(str(e), 1, 1) from None
    if args.test:
        data = _load_json(args.test)
        if not isinstance(data, dict) or "plus" not in data or "minus" not in data:
            raise InputError(f'{args.test}: expected {{"plus": ..., "minus": ..., "scale": ...}}', 1, 1)
        try:
            scale = frac(data.get("scale", 1))
        except (ValueError, ZeroDivisionError) as e:
            raise InputError(f"{args.test}: {e}", 1, 1) from None
        f = SupportDifference(_polytope(data["plus"], args.test), _polytope(data["minus"], args.test), scale)
        res = extremality_test(bodies, f, space=space, seed=args.seed)
        if args.json:
            d = {"extremal": res.extremal, "residual_atoms": res.residual_atoms}
            if res.decomposition is not None:
                d["s"] = [fmt_rational(x) for x in res.decomposition.s]
                d["nonzero_parts"] = res.decomposition.nonzero_parts()
            print(json.dumps(d))
            return 0
        print(f"extremal: {'yes' if res.extremal else 'no'}")
        if res.decomposition is not None:
            print(f"linear part s = {_fmt_vec(res.decomposition.s)}")
            parts = res.decomposition.nonzero_parts()
            print("nonzero degenerate parts: " + (", ".join(f"D_{j}" for j in parts) if parts else "none"))
        else:
            print(f"measure has {res.residual_atoms} nonzero atoms")
        return 0
    if args.json:
        print(json.dumps(space.to_json()))
        return 0
    cls = space.report.cls.value
    print(f"class={cls}, {space.summary()}")
    if space.kernel_dim != space.formula_dim:
        raise InvariantViolation(f"kernel dimension {space.kernel_dim} != formula {space.formula_dim}")
    g = space.graph
    for j, c in enumerate(space.components, start=1):
        print(f"Omega_{j} (beta = {_fmt_set(c.beta)}): " + ", ".join(_fmt_vec(w) for w in c.omega))
    print("active normals: " + ", ".join(_fmt_vec(g.normals[i]) for i in g.active_vertices))
    for k, v in enumerate(space.basis, start=1):
        print(f"basis {k}: {_fmt_vec(v)}")
    return 0


def cmd_localaf(args, out: _Out) -> int:
    from .extremals import extremal_space, local_af_extension

    bodies = _bodies(args.file)
    if not 1 <= args.r <= len(bodies):
        raise InputError(f"--r must lie in 1..{len(bodies)}", 1, 1)
    try:
        space = extremal_space(bodies, seed=args.seed)
    except ValueError as e:
        raise InputError(str(e), 1, 1) from None
    report = []
    ok = True
    for k, v in enumerate(space.basis, start=1):
        try:
            res = local_af_extension(bodies, args.r, space.full_vector(v), graph=space.graph)
        except ValueError as e:
            raise InputError(str(e), 1, 1) from None
        worst = max(res.quadratic.values(), default=Fraction(0))
        ok &= res.audit_passed
        report.append({"basis": k, "audit_passed": res.audit_passed, "max_atom": fmt_rational(worst)})
        if not args.json:
            status = "passed" if res.audit_passed else "FAILED"
            print(f"basis {k}: extension solved; quadratic audit {status} (largest atom {out.num(worst)})")
    if args.json:
        print(json.dumps({"r": args.r, "results": report}))
    if not ok:
        raise InvariantViolation("quadratic measure has a positive atom")
    return 0


def cmd_stanley(args, out: _Out) -> int:
    from .stanley import RankSequence, exst_equivalence_audit, parse_poset, trivial_extremal_test

    try:
        text = Path(args.file).read_text()
    except OSError as e:
        raise InputError(f"{args.file}: {e.strerror}", 1, 1) from None
    P = parse_poset(text)
    audit = exst_equivalence_audit(P)
    N = audit.counts
    zeros = [i for i in range(1, P.n + 1) if trivial_extremal_test(P, i)]
    eq = audit.equality_indices
    cond_d = [r.i for r in audit.rows if r.d]
    lc = RankSequence(N).log_concave()
    if args.json:
        print(json.dumps({"N": N, "log_concave": lc, "trivial_zeros": zeros, "equality": eq,
                          "condition_d": cond_d, "disagreements": audit.disagreements}))
    else:
        zs = "trivial zeros at i=" + ",".join(map(str, zeros)) if zeros else "no trivial zeros"
        print(f"N = {N}; {zs}")
        print(f"log-concave: {'yes' if lc else 'no'}")
        print("equality N_i^2 = N_(i-1) N_(i+1) at i=" + (",".join(map(str, eq)) or "none"))
        print("condition (d) at i=" + (",".join(map(str, cond_d)) or "none"))
    if audit.disagreements or not lc:
        raise InvariantViolation(f"equality conditions disagree at i={audit.disagreements}")
    return 0


def cmd_verify(args, out: _Out) -> int:
    from .acceptance import SUITES, run_suite

    ok = True
    for fn in SUITES:
        res = run_suite(fn, seed=args.seed, limit=args.size)
        ok &= res.passed
        print(res.line(), flush=True)
        for f in res.failures[1:]:
            print(f"    {f}")
    print(f"seed={args.seed} size={args.size if args.size is not None else 'full'}: "
          + ("all suites passed" if ok else "FAILURES"))
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="afx", description="Exact mixed volumes, Alexandrov-Fenchel extremals and poset sequences.")
    p.add_argument("--decimal", action="store_true", help="append an inexact decimal approximation")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("mixedvol", help="V_n of n polytopes in R^n")
    s.add_argument("files", nargs="+")
    s.set_defaults(fn=cmd_mixedvol)

    s = sub.add_parser("areameasure", help="atoms of the mixed area measure of n-1 polytopes")
    s.add_argument("files", nargs="+")
    s.set_defaults(fn=cmd_areameasure)

    s = sub.add_parser("classify", help="criticality class of a collection")
    s.add_argument("file")
    s.set_defaults(fn=cmd_classify)

    s = sub.add_parser("extremal", help="extremal space of a collection")
    s.add_argument("file")
    s.add_argument("--test", metavar="F.json", help='test f = h_plus - scale*h_minus given as {"plus", "minus", "scale"}')
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(fn=cmd_extremal)

    s = sub.add_parser("localaf", help="local AF extension and quadratic sign audit")
    s.add_argument("file")
    s.add_argument("--r", type=int, default=1, help="1-based index of the body to replace")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(fn=cmd_localaf)

    s = sub.add_parser("stanley", help="rank sequence and equality audit of a poset file")
    s.add_argument("file")
    s.set_defaults(fn=cmd_stanley)

    s = sub.add_parser("verify", help="run the seeded verification suites")
    s.add_argument("--size", type=int, default=None, help="cap on random instances per suite")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(fn=cmd_verify)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    out = _Out(args.decimal)
    try:
        return args.fn(args, out)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except InvariantViolation as e:
        print(f"invariant violation: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
