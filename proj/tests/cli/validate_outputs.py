#!/usr/bin/env python3
"""Runs every subcommand and validates each JSON it writes against the shipped
schemas; checks that every CSV has a one-line header and rectangular rows."""

import argparse
import csv
import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema

SCHEMA_BY_FORMAT = {
    "rftrap-report": "report.schema.json",
    "rftrap-profile": "profile.schema.json",
    "rftrap-trajectory": "trajectory.schema.json",
    "rftrap-sweep": "sweep.schema.json",
    "rftrap-figures": "figures.schema.json",
}


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--tool", required=True)
    ap.add_argument("--configs", required=True, type=pathlib.Path)
    ap.add_argument("--schemas", required=True, type=pathlib.Path)
    args = ap.parse_args()

    validators = {}
    for fmt, name in SCHEMA_BY_FORMAT.items():
        schema = json.loads((args.schemas / name).read_text())
        jsonschema.Draft202012Validator.check_schema(schema)
        validators[fmt] = jsonschema.Draft202012Validator(schema)

    failures = []
    with tempfile.TemporaryDirectory() as tmp:
        out = pathlib.Path(tmp)
        c = args.configs

        def tool(*argv, expect=(0,), stdout_name=None):
            res = subprocess.run([args.tool, *map(str, argv)], capture_output=True, text=True)
            if res.returncode not in expect:
                failures.append(f"{' '.join(map(str, argv))}: exit {res.returncode}: {res.stderr.strip()}")
            if stdout_name:
                (out / stdout_name).write_text(res.stdout)

        for cfg in sorted(c.glob("*.yaml")):
            tool("params", "--config", cfg, "--format", "json", stdout_name=f"params_{cfg.stem}.json")
            tool("params", "--config", cfg, "--format", "csv", stdout_name=f"params_{cfg.stem}.csv")
        tool("params", "--config", c / "unstable_quadrupole.yaml", "--format", "json",
             stdout_name="params_unstable.json")
        tool("scale", "--config", c / "octopole_example.yaml", "--format", "json",
             stdout_name="scale.json")
        tool("scale", "--config", c / "octopole_example.yaml", "--format", "json",
             "--linear-density", "1e6 /mm", stdout_name="scale_exceeds.json")
        tool("profile", "--config", c / "octopole_example.yaml", "--out", out, "--name", "prof",
             "--format", "json", stdout_name="profile_report.json")
        tool("profile", "--config", c / "quadrupole_temperature_sweep.yaml", "--out", out, "--name", "qprof")
        tool("trajectory", "--config", c / "trajectory_quadrupole.yaml", "--out", out, "--name", "traj")
        tool("trajectory", "--config", c / "escape_octopole.yaml", "--out", out, "--name", "esc",
             expect=(3,))
        tool("sweep", "--config", c / "octopole_temperature_sweep.yaml", "--out", out / "sweep")
        tool("figures", "--out", out / "figures")

        jsons = sorted(out.rglob("*.json"))
        csvs = sorted(out.rglob("*.csv"))
        for path in jsons:
            doc = json.loads(path.read_text())
            fmt = doc.get("format")
            if fmt not in validators:
                failures.append(f"{path.name}: unknown format {fmt!r}")
                continue
            for err in validators[fmt].iter_errors(doc):
                failures.append(f"{path.name}: {'/'.join(map(str, err.absolute_path))}: {err.message}")
        for path in csvs:
            rows = list(csv.reader(path.open(newline="")))
            if not rows or not rows[0] or not all(rows[0]):
                failures.append(f"{path.name}: missing or empty header")
                continue
            width = len(rows[0])
            for n, row in enumerate(rows[1:], start=2):
                if len(row) != width:
                    failures.append(f"{path.name}:{n}: {len(row)} cells, header has {width}")
                    break
            if b"\r" in path.read_bytes():
                failures.append(f"{path.name}: CR line ending")

        print(f"validated {len(jsons)} JSON and {len(csvs)} CSV files")

    for f in failures:
        print("FAIL", f)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
