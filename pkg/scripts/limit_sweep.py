"""Non-relativistic limit sweep for a metric; plot-ready CSV on stdout.

    python3 scripts/limit_sweep.py [--scenario scenarios/oscillator.json] [--scales 0.2 0.1 0.05 0.025]

Columns: v_scale, absolute position error, relative error and the ratio of
relative errors between consecutive scales (about 1/4 when the error is O(v^2)).
"""
import argparse
from pathlib import Path

from jetflow.cli import _metric, parse_scenario
from jetflow.integrate import IntegratorConfig
from jetflow.relativistic import nonrel_limit_compare

ROOT = Path(__file__).resolve().parents[1]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--scenario", default=str(ROOT / "scenarios" / "oscillator.json"))
    ap.add_argument("--scales", type=float, nargs="+", default=[0.2, 0.1, 0.05, 0.025, 0.0125])
    ap.add_argument("--tol", type=float, default=1e-12)
    a = ap.parse_args()
    sc = parse_scenario(Path(a.scenario).read_text(), Path(a.scenario).stem)
    g = _metric(sc)
    lim = sc.limit
    cfg = IntegratorConfig(abs_tol=a.tol, rel_tol=a.tol)
    print("v_scale,position_error,relative_error,ratio")
    prev = None
    for s in a.scales:
        r = nonrel_limit_compare(g, s, lim.get("direction"), lim.get("q0"), float(lim.get("window", 6.283185307179586)), cfg)
        ratio = r.relative_error / prev if prev else float("nan")
        print(f"{s:.6g},{r.max_position_error:.6e},{r.relative_error:.6e},{ratio:.4f}")
        prev = r.relative_error


if __name__ == "__main__":
    main()
