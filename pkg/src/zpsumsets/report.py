"""Report serialization: canonical JSON and its CSV projection.

The JSON document is the report of record; the CSV is a projection of the
same data (one row per cardinality bucket plus a totals row).  Both are
deterministic byte-for-byte for a fixed configuration.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path


def canonical_json_bytes(doc: dict) -> bytes:
    return (json.dumps(doc, indent=2, sort_keys=True) + "\n").encode("utf-8")


def write_json(doc: dict, path) -> Path:
    path = Path(path)
    path.write_bytes(canonical_json_bytes(doc))
    return path


def csv_text(doc: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["card_a", "card_b", "tested", "hypothesis_met", "failures"])
    for row in doc["by_cardinality"]:
        writer.writerow(
            [
                row["a"],
                "" if row["b"] is None else row["b"],
                row["tested"],
                row["hypothesis_met"],
                row["failures"],
            ]
        )
    writer.writerow(
        [
            "total",
            "",
            doc["instances_tested"],
            doc["hypothesis_met_count"],
            doc["conclusion_failures"]["total"],
        ]
    )
    return buf.getvalue()


def write_csv(doc: dict, path) -> Path:
    path = Path(path)
    path.write_text(csv_text(doc), encoding="utf-8")
    return path
