"""Regenerate tests/golden from the shipped scenarios.

Every subcommand is run on every scenario with the scenario's own seed and
fixed-step RK4 block. Output directories hold report.json (or error.json) and
any CSVs; exit codes go to tests/golden/exit_codes.json.

    python3 scripts/make_goldens.py [--check]
"""
import argparse
import filecmp
import json
import shutil
import sys
import tempfile
from pathlib import Path

from jetflow.cli import COMMANDS, parse_scenario, run

ROOT = Path(__file__).resolve().parents[1]
SCENARIOS = ROOT / "scenarios"
GOLDEN = ROOT / "tests" / "golden"


def generate(dest: Path) -> dict:
    codes = {}
    for path in sorted(SCENARIOS.glob("*.json")):
        sc = parse_scenario(path.read_text(encoding="utf-8"), path.stem)
        if sc.integrator.method != "rk4":
            raise SystemExit(f"{path.name}: golden runs require a fixed-step rk4 integrator block")
        for cmd in sorted(COMMANDS):
            codes[f"{path.stem}/{cmd}"] = run(cmd, str(path), str(dest / path.stem / cmd))
    (dest / "exit_codes.json").write_text(json.dumps(codes, indent=2, sort_keys=True) + "\n")
    return codes


def differences(a: Path, b: Path) -> list:
    out = []
    files = {p.relative_to(a) for p in a.rglob("*") if p.is_file()}
    files |= {p.relative_to(b) for p in b.rglob("*") if p.is_file()}
    for rel in sorted(files):
        pa, pb = a / rel, b / rel
        if not (pa.exists() and pb.exists() and filecmp.cmp(pa, pb, shallow=False)):
            out.append(str(rel))
    return out


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--check", action="store_true", help="compare against the stored goldens instead of writing")
    args = ap.parse_args()
    if args.check:
        with tempfile.TemporaryDirectory() as tmp:
            generate(Path(tmp))
            diff = differences(GOLDEN, Path(tmp))
        for d in diff:
            print("differs:", d)
        return 1 if diff else 0
    if GOLDEN.exists():
        shutil.rmtree(GOLDEN)
    codes = generate(GOLDEN)
    print(f"wrote {len(codes)} golden runs to {GOLDEN}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
