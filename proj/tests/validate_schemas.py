"""Validates the shipped manifests and CLI reports against docs/*.schema.json."""

import json
import subprocess
import sys
from pathlib import Path

import jsonschema

root = Path(sys.argv[1])
cli = sys.argv[2]
manifest_schema = json.loads((root / "docs/manifest.schema.json").read_text())
report_schema = json.loads((root / "docs/report.schema.json").read_text())

fixtures = sorted((root / "fixtures").glob("*.json"))
for path in fixtures:
    jsonschema.validate(json.loads(path.read_text()), manifest_schema)

runs = [
    ["catalog", "su2", "check"],
    ["catalog", "sl2-lor", "classify"],
    ["catalog", "sl2-sasnokc", "classify"],
    ["catalog", "sl2-sasnokc", "null-analysis"],
    ["catalog", "r3-null", "null-analysis"],
    ["catalog", "sl2-para", "product", "su2"],
    ["check", str(root / "fixtures/invalid/corrupted-alpha.json")],
]
for args in runs:
    out = subprocess.run([cli, "--format", "json", *args], capture_output=True, text=True)
    report = json.loads(out.stdout)
    jsonschema.validate(report, report_schema)
    assert report["exit_code"] == out.returncode, (args, report["exit_code"], out.returncode)

print(f"{len(fixtures)} manifests and {len(runs)} reports conform")
