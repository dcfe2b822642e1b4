"""Validates shipped configs against the schema; malformed test inputs must be rejected."""
import json
import pathlib
import sys

import jsonschema

schema_path, configs_dir, data_dir = map(pathlib.Path, sys.argv[1:4])
schema = json.loads(schema_path.read_text())
jsonschema.Draft202012Validator.check_schema(schema)
validator = jsonschema.Draft202012Validator(schema)

failures = 0
for path in sorted(configs_dir.glob("*.json")) + [data_dir / "tight_tolerance.json", data_dir / "wrong_class.json"]:
    errors = list(validator.iter_errors(json.loads(path.read_text())))
    if errors:
        failures += 1
        print(f"FAIL {path.name}: {errors[0].message}")
    else:
        print(f"ok   {path.name}")

bad = json.loads((data_dir / "bad_domain_key.json").read_text())
if validator.is_valid(bad):
    failures += 1
    print("FAIL bad_domain_key.json was accepted")
else:
    print("ok   bad_domain_key.json rejected")

sys.exit(1 if failures else 0)
