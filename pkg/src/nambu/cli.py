"""Command-line front end.

Exit codes: 0 when every requested check passes, 1 on a failed check,
2 on usage or validation errors.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from typing import Optional, Sequence

import numpy as np

from . import lie_su2 as su2
from . import s3_nambu as s3
from .exterior import KForm
from .flow import (
    TOL_NOETHER,
    TOL_TRAJ,
    IntegratorConfig,
    SpinSimConfig,
    compare_spin_vs_nambu,
    noether_check,
)
from .nambu_core import NambuChart, flat, sharp

TOL_CHECK = 1e-9
XI_NAMES = {"e1": 1, "e2": 2, "e3": 3}


class UsageError(Exception):
    pass


def _floats(n: int):
    def parse(text: str) -> tuple:
        try:
            vals = tuple(float(v) for v in text.split(","))
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected {n} comma-separated numbers, got {text!r}")
        if len(vals) != n:
            raise argparse.ArgumentTypeError(f"expected {n} comma-separated numbers, got {text!r}")
        return vals

    return parse


def _positive(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return v


def _bool(text) -> bool:
    if isinstance(text, bool):
        return text
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise UsageError(f"not a boolean: {text!r}")


def read_config(path: str) -> dict:
    """Plain ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected 'key = value'")
            key, val = (s.strip() for s in line.split("=", 1))
            out[key.lstrip("-").replace("-", "_")] = val
    return out


def _report(name: str, value: float, tol: float) -> bool:
    ok = bool(value <= tol)
    print(f"{name:<44s} {value:.3e}  (tol {tol:.0e})  {'PASS' if ok else 'FAIL'}")
    return ok


# ---------------------------------------------------------------------------
# subcommands


def cmd_algebra_check(args) -> int:
    rng = np.random.default_rng(args.seed)
    ok = True
    E = np.eye(3)
    for i, j, k in s3.PAIRS:
        got = su2.algebra_bracket(E[i - 1], E[j - 1])
        ok &= _report(f"[e{i},e{j}] - 2 e{k}", float(np.max(np.abs(got - 2 * E[k - 1]))), 0.0)
        Mi, Mj = su2.BASIS_MATRICES[i - 1], su2.BASIS_MATRICES[j - 1]
        comm = Mi @ Mj - Mj @ Mi
        ok &= _report(
            f"matrix commutator [e{i},e{j}] - 2 e{k}",
            float(np.max(np.abs(comm - 2 * su2.BASIS_MATRICES[k - 1]))),
            1e-14,
        )

    points = rng.uniform(-2, 2, size=(args.samples, 3))
    chart = s3.CHART
    chart_sharps = (
        lambda x, y, z: (0, -2 * z, 2 * y),
        lambda x, y, z: (2 * z, 0, -2 * x),
        lambda x, y, z: (-2 * y, 2 * x, 0),
    )
    sharp_err = max(
        float(np.max(np.abs(sharp(s3.s_form(k)(p), chart) - np.array(chart_sharps[k - 1](*p)))))
        for p in points
        for k in (1, 2, 3)
    )
    ok &= _report("S_k# vs chart formulas", sharp_err, 0.0)

    br = sc = cons = 0.0
    for p in points:
        r = s3.s_algebra_check(p)
        br = max(br, *r.bracket_residuals.values())
        sc = max(sc, *r.shortcut_residuals.values())
        cons = max(cons, *r.consistency_residuals.values())
    ok &= _report("{S_i,S_j} + 2 S_k (cyclic)", br, TOL_CHECK)
    ok &= _report("closed-form shortcut vs bracket", sc, TOL_CHECK)
    ok &= _report("[S_i#,S_j#] vs generator([e_j,e_i])", cons, TOL_CHECK)

    rt1 = rt2 = 0.0
    for n in (1, 2):
        ch = NambuChart(n)
        for _ in range(args.samples):
            X = rng.normal(size=ch.dim)
            rt1 = max(rt1, float(np.max(np.abs(sharp(flat(X, ch), ch) - X))))
    for _ in range(args.samples):
        a = KForm(2, 3, rng.normal(size=3))
        rt2 = max(rt2, (flat(sharp(a, chart), chart) - a).norm())
    ok &= _report("sharp(flat(X)) - X", rt1, 0.0)
    ok &= _report("flat(sharp(a)) - a  (n=1)", rt2, 0.0)
    return 0 if ok else 1


def cmd_invariance_check(args) -> int:
    rng = np.random.default_rng(args.seed)
    ok = True
    imgs = [su2.algebra_quaternion(v) for v in np.eye(3)]
    ident = su2.Versor.identity()
    ok &= _report("omega(e)(e1,e2,e3) - 1", abs(s3.invariant_three_form(ident, *imgs) - 1.0), 0.0)
    eps_err = 0.0
    for _ in range(args.samples):
        a, b, c = rng.normal(size=(3, 3))
        lifted = [su2.algebra_quaternion(v) for v in (a, b, c)]
        eps_err = max(eps_err, abs(s3.invariant_three_form(ident, *lifted) - s3.epsilon_form(a, b, c)))
    ok &= _report("omega(e) - epsilon", eps_err, 0.0)

    inv = defect = equiv = 0.0
    for _ in range(args.samples):
        h = su2.Versor.from_array(rng.normal(size=4))
        g = su2.Versor.from_array(rng.normal(size=4))
        vs = [s3.random_tangent(g, rng) for _ in range(3)]
        w0 = s3.invariant_three_form(g, *vs)
        w1 = s3.invariant_three_form(su2.group_mul(h, g), *(su2.left_translate(h, v) for v in vs))
        inv = max(inv, abs(w1 - w0))
        defect = max(defect, s3.nambu_action_defect(h, g, *vs))
        lhs = su2.h_map(su2.group_mul(h, g)).array
        rhs = su2.spinor_action(h, su2.h_map(g)).array
        equiv = max(equiv, float(np.max(np.abs(lhs - rhs))))
    ok &= _report("left invariance of omega", inv, 1e-12)
    ok &= _report("Nambu action defect", defect, 1e-12)
    ok &= _report("h o L_U - Phi_U o h", equiv, 1e-15)
    return 0 if ok else 1


def cmd_noether_check(args) -> int:
    xi = np.eye(3)[XI_NAMES[args.xi] - 1]
    cfg = _integrator(args.dt, args.t_end, False)
    r = noether_check(xi, XI_NAMES[args.flow], np.array(args.p0), cfg, tol=args.tol)
    print(f"flow of (dJ1({args.flow}) ^ dJ2({args.flow}))#, 2-form dJ1({args.xi}) ^ dJ2({args.xi})")
    ok = _report("Lie-derivative residual", r.lie_residual, args.tol)
    ok &= _report("flow-pullback residual", r.pullback_residual, args.tol)
    print(f"{'H1 drift':<44s} {r.h1_drift:.3e}")
    print(f"{'H2 drift':<44s} {r.h2_drift:.3e}")
    print(f"L_X sigma at p0: {r.lie_at_start!r}")
    print("conserved" if ok else "NOT conserved")
    return 0 if ok else 1


def cmd_spin_demo(args) -> int:
    re1, im1, re2, im2 = args.initial
    try:
        initial = su2.Spinor(re1, im1, re2, im2)
        cfg = SpinSimConfig(
            axis=tuple(args.axis),
            omega_l=args.omega_l,
            initial=initial,
            integrator=_integrator(args.dt, args.t_end, args.renormalize),
        )
    except ValueError as exc:
        raise UsageError(str(exc))
    report = compare_spin_vs_nambu(cfg, tol=args.tol)
    if args.out:
        write_csv(args.out, report)
    summary = {
        "max_deviation": report.max_deviation,
        "norm_drift": report.norm_drift,
        "steps": cfg.integrator.steps,
        "dt": cfg.integrator.step,
        "t_end": cfg.integrator.t_end,
        "pass": report.passed,
        "tolerances": {"traj": args.tol},
    }
    if args.summary:
        with open(args.summary, "w") as fh:
            json.dump(summary, fh, indent=2)
            fh.write("\n")
    ok = _report("max |h(q(t)) - U(t) xi0|", report.max_deviation, args.tol)
    print(f"{'versor norm drift':<44s} {report.norm_drift:.3e}")
    return 0 if ok else 1


CSV_HEADER = ["t", "qx", "qy", "qz", "qw", "sx_re", "sx_im", "sz_re", "sz_im", "dev"]


def write_csv(path: str, report) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for t, q, s, d in zip(report.times, report.versors, report.spinors, report.deviations):
            w.writerow([f"{v:.17g}" for v in (t, *q, *s, d)])


def _integrator(dt, t_end, renormalize) -> IntegratorConfig:
    try:
        return IntegratorConfig(dt=dt, t_end=t_end, renormalize=renormalize)
    except ValueError as exc:
        raise UsageError(str(exc))


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nambu", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="file of 'key = value' lines; flags take precedence")
        return p

    p = common(sub.add_parser("algebra-check", help="su(2) brackets, S-algebra, sharp/flat"))
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_algebra_check)

    p = common(sub.add_parser("invariance-check", help="left invariance, Nambu action, equivariance"))
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_invariance_check)

    p = common(sub.add_parser("noether-check", help="conservation of dJ1(xi) ^ dJ2(xi)"))
    p.add_argument("--xi", choices=sorted(XI_NAMES), default="e1")
    p.add_argument("--flow", choices=sorted(XI_NAMES), default="e1",
                   help="Hamiltonians (J1(e_k), J2(e_k)) generating the flow")
    p.add_argument("--p0", type=_floats(3), default=(0.3, 1.0, -0.5))
    p.add_argument("--dt", type=_positive, default=1e-3)
    p.add_argument("--t-end", type=_positive, default=1.0)
    p.add_argument("--tol", type=_positive, default=TOL_NOETHER)
    p.set_defaults(func=cmd_noether_check)

    p = common(sub.add_parser("spin-demo", help="spin-1/2 precession vs Nambu flow on S^3"))
    p.add_argument("--axis", type=_floats(3), default=(0.0, 0.0, 1.0))
    p.add_argument("--omega-l", type=float, default=1.0)
    p.add_argument("--initial", type=_floats(4), default=(1.0, 0.0, 0.0, 0.0))
    p.add_argument("--dt", type=_positive, default=1e-3)
    p.add_argument("--t-end", type=_positive, default=10.0)
    p.add_argument("--out", help="CSV trajectory file")
    p.add_argument("--summary", help="JSON summary file")
    p.add_argument("--renormalize", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--tol", type=_positive, default=TOL_TRAJ)
    p.set_defaults(func=cmd_spin_demo)
    return parser


def _subparser(parser: argparse.ArgumentParser, name: str) -> argparse.ArgumentParser:
    for action in parser._subparsers._group_actions:
        if name in action.choices:
            return action.choices[name]
    raise KeyError(name)


def parse_args(argv: Sequence[str]) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        sp = _subparser(parser, args.command)
        values = read_config(args.config)
        known = {a.dest: a for a in sp._actions}
        for key in values:
            if key not in known or key in ("help", "config", "func"):
                raise UsageError(f"unknown config key {key!r} for {args.command}")
        if "renormalize" in values:
            values["renormalize"] = _bool(values["renormalize"])
        sp.set_defaults(**values)
        args = parser.parse_args(argv)
    return args


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parse_args(argv)
        return args.func(args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (UsageError, OSError) as exc:
        build_parser().print_usage(sys.stderr)
        print(f"nambu: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
