"""Regenerate the checked-in JSON Schemas from the pydantic models.

Run from the repository root after any model change:

    python3 scripts/generate_schemas.py

tests/test_service.py fails if the checked-in files drift from the models.
"""

import json
import pathlib

from phasekit.models import (
    CompareReport,
    CountReport,
    RunReport,
    ShorReport,
    SweepReport,
)

SCHEMAS = {
    "run_report.schema.json": RunReport,
    "count_report.schema.json": CountReport,
    "shor_report.schema.json": ShorReport,
    "sweep_report.schema.json": SweepReport,
    "compare_report.schema.json": CompareReport,
}


def main() -> None:
    out_dir = pathlib.Path(__file__).resolve().parent.parent / "src" / "phasekit" / "schemas"
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, model in SCHEMAS.items():
        schema = model.model_json_schema()
        path = out_dir / name
        path.write_text(json.dumps(schema, indent=2, sort_keys=True) + "\n")
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
