# src/bounded_approx/store/reports.py
from __future__ import annotations

import csv
import hashlib
import io
from collections.abc import Iterable, Sequence
from pathlib import Path
from typing import Any

import orjson

from ..quality.weakstar import WeakStarReport

_DUMP_OPTS = orjson.OPT_SORT_KEYS | orjson.OPT_SERIALIZE_NUMPY


def sha256_bytes(b: bytes) -> str:
    return hashlib.sha256(b).hexdigest()


def canonical_json(obj: Any) -> bytes:
    # Compact, key-sorted bytes for hashing.
    return orjson.dumps(obj, option=_DUMP_OPTS)


def stable_json_dumps(obj: Any) -> str:
    return orjson.dumps(obj, option=_DUMP_OPTS | orjson.OPT_INDENT_2).decode("utf-8")


def derive_run_id(config: dict[str, Any], scenario: dict[str, Any]) -> str:
    """Deterministic from what defines the run; identical flags give the identical id."""
    return sha256_bytes(canonical_json({"config": config, "scenario": scenario}))[:32]


def with_snapshot_id(payload: dict[str, Any]) -> dict[str, Any]:
    """Attach snapshot_id = hash of everything else in the report."""
    material = {k: v for k, v in payload.items() if k != "snapshot_id"}
    return {**material, "snapshot_id": sha256_bytes(canonical_json(material))}


def _write_atomic(p: Path, text: str) -> None:
    p.parent.mkdir(parents=True, exist_ok=True)
    tmp = p.with_suffix(p.suffix + ".tmp")
    with tmp.open("w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    tmp.replace(p)


def write_json_report(path: str | Path, payload: Any) -> Path:
    p = Path(path)
    _write_atomic(p, stable_json_dumps(payload) + "\n")
    return p


def read_report(path: str | Path) -> dict[str, Any]:
    return orjson.loads(Path(path).read_bytes())


def _cell(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_csv_table(path: str | Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_cell(v) for v in row])
    p = Path(path)
    _write_atomic(p, buf.getvalue())
    return p


def weakstar_table(report: WeakStarReport) -> tuple[list[str], list[list[Any]]]:
    """Rows n = 1..L, columns |c_k(f_n) - c_k(g)| for k = -K..K."""
    header = ["n"] + [f"k={k}" for k in range(-report.K, report.K + 1)] + ["max"]
    rows = [
        [n, *(float(x) for x in report.deviations[n - 1]), float(report.curve[n - 1])]
        for n in range(1, report.L + 1)
    ]
    return header, rows


PIPELINE_COLUMNS = [
    "m",
    "status",
    "k_m",
    "d_m",
    "achieved",
    "u_bound",
    "p_sup",
    "p_sup_recheck",
    "max_err_E",
    "median_err_E",
    "fourier_deviation",
    "lower_witness",
]


def pipeline_table(steps: Sequence[dict[str, Any]]) -> tuple[list[str], list[list[Any]]]:
    """One row per step m from the serialized step records."""
    return PIPELINE_COLUMNS, [[s.get(c) for c in PIPELINE_COLUMNS] for s in steps]


def csv_path_for(json_path: str | Path) -> Path:
    return Path(json_path).with_suffix(".csv")
