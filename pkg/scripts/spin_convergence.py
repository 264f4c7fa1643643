"""Step-size sweep for the S^3 Nambu flow against closed-form Larmor precession.

    python3 scripts/spin_convergence.py --omega-l 10 --t-end 10 --out sweep.csv
"""
import argparse
import csv

import numpy as np

from nambu.flow import IntegratorConfig, SpinSimConfig, compare_spin_vs_nambu
from nambu.lie_su2 import Spinor


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--axis", default="0.6,0,0.8")
    ap.add_argument("--omega-l", type=float, default=10.0)
    ap.add_argument("--t-end", type=float, default=10.0)
    ap.add_argument("--dts", default="0.032,0.016,0.008,0.004,0.002,0.001")
    ap.add_argument("--out")
    args = ap.parse_args()

    axis = tuple(float(v) for v in args.axis.split(","))
    dts = [float(v) for v in args.dts.split(",")]
    init = Spinor.from_complex(np.array([1.0, 1.0j]) / np.sqrt(2))

    rows = []
    for dt in dts:
        row = {"dt": dt}
        for renorm in (False, True):
            cfg = SpinSimConfig(axis, args.omega_l, init, IntegratorConfig(dt, args.t_end, renorm))
            r = compare_spin_vs_nambu(cfg)
            tag = "renorm" if renorm else "plain"
            row[f"dev_{tag}"] = r.max_deviation
            row[f"drift_{tag}"] = r.norm_drift
        rows.append(row)

    print(f"{'dt':>8s} {'dev':>10s} {'order':>6s} {'drift':>10s} {'dev(renorm)':>12s} {'drift(renorm)':>14s}")
    prev = None
    for row in rows:
        order = "" if prev is None else f"{np.log2(prev['dev_plain'] / row['dev_plain']):6.2f}"
        print(
            f"{row['dt']:8.4f} {row['dev_plain']:10.3e} {order:>6s} {row['drift_plain']:10.3e}"
            f" {row['dev_renorm']:12.3e} {row['drift_renorm']:14.3e}"
        )
        prev = row

    if args.out:
        with open(args.out, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(rows[0]), lineterminator="\n")
            w.writeheader()
            w.writerows(rows)


if __name__ == "__main__":
    main()
