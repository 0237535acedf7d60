"""Runs every subcommand and validates its JSON against the shipped schema."""
import json
import pathlib
import subprocess
import sys

import jsonschema

tool, root = sys.argv[1], pathlib.Path(sys.argv[2])
schemas = {p.stem: json.loads(p.read_text()) for p in (root / "schemas").glob("*.json")}
ops = root / "data" / "operators"
gauss = str(ops / "gauss.json")

runs = [
    ("singular", ["singular", "--op", gauss], 0),
    ("singular", ["singular", "--op", str(ops / "three_sites.json")], 0),
    ("regions", ["regions", "--op", gauss, "--grid", "-1,2,5,-1,1,5"], 0),
    ("regions", ["regions", "--op", str(ops / "three_sites.json")], 0),
    ("series-ratio", ["series-ratio", "--op", gauss, "--z", "1/5", "--n-max", "400", "--ratio-tol", "1e-4"], 0),
    ("logderiv", ["logderiv", "--op", gauss, "--z", "0.2"], 0),
    ("logderiv", ["logderiv", "--op", gauss, "--z", "0.8", "--backend", "float", "--precision-bits", "96"], 0),
    ("cf", ["cf", "--op", gauss, "--z", "1/5"], 0),
    ("cf", ["cf", "--op", str(ops / "three_poles.json"), "--z", "0.3", "--depth", "200"], 0),
    ("error", ["cf", "--op", str(ops / "pole_and_constant.json"), "--z", "1/3"], 3),
    ("hypergeom-check", ["hypergeom-check", "--a", "1/2", "--b", "1/3", "--c", "1/4", "--z", "0.2"], 0),
    ("hypergeom-check", ["hypergeom-check", "--a", "1/2", "--b", "1/3", "--c", "1/4", "--z", "0.8"], 0),
    ("chain-verify", ["chain-verify", "--op", gauss, "--z", "1/5"], 0),
    ("error", ["logderiv", "--op", gauss, "--z", "1/2"], 3),
    ("error", ["logderiv", "--op", gauss, "--z", "1/5", "--n-max", "3", "--tol", "1e-30"], 4),
    ("error", ["singular", "--op", str(root / "schemas" / "missing.json")], 2),
    ("run-config", ["logderiv", "--op", gauss, "--z", "1/5", "--dump-config"], 0),
]

failures = 0
for schema, args, expected in runs:
    first = subprocess.run([tool, *args], capture_output=True, text=True)
    second = subprocess.run([tool, *args], capture_output=True, text=True)
    label = " ".join(args)
    problems = []
    if first.returncode != expected:
        problems.append(f"exit {first.returncode}, expected {expected}")
    if first.stdout != second.stdout:
        problems.append("output differs between runs")
    try:
        jsonschema.validate(json.loads(first.stdout), schemas[schema])
    except (json.JSONDecodeError, jsonschema.ValidationError) as exc:
        problems.append(str(exc).splitlines()[0])
    print(("FAIL " if problems else "ok   ") + f"[{schema}] {label}" + ("" if not problems else ": " + "; ".join(problems)))
    failures += bool(problems)

for path in sorted(ops.glob("*.json")):
    try:
        jsonschema.validate(json.loads(path.read_text()), schemas["operator"])
        print(f"ok   [operator] {path.name}")
    except jsonschema.ValidationError as exc:
        print(f"FAIL [operator] {path.name}: {str(exc).splitlines()[0]}")
        failures += 1

embedded = json.loads(subprocess.run([tool, "--schema"], capture_output=True, text=True).stdout)
if embedded != schemas:
    print("FAIL embedded schemas differ from schemas/")
    failures += 1

sys.exit(1 if failures else 0)
