"""CSV / JSON serialisation of run artefacts.

Floats are written with ``repr`` so files round-trip exactly and are
byte-identical across reruns. CSVs use ``,`` and LF line endings.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .engine import SimTrace
from .metrics import METRIC_COLUMNS, MetricsRecord

TRAJECTORY_COLUMNS = ("t", "kind", "id", "x", "y", "vx", "vy")


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def trajectories_csv(trace: SimTrace) -> str:
    def rows():
        for t in range(len(trace.metrics)):
            tt = trace.metrics[t].t
            for i in range(trace.usv_positions.shape[1]):
                x, y = trace.usv_positions[t, i]
                vx, vy = trace.usv_velocities[t, i]
                yield (tt, "usv", i, float(x), float(y), float(vx), float(vy))
            for j in range(trace.target_positions.shape[1]):
                x, y = trace.target_positions[t, j]
                vx, vy = trace.target_velocities[t, j]
                yield (tt, "target", j, float(x), float(y), float(vx), float(vy))

    return _csv_text(TRAJECTORY_COLUMNS, rows())


def metrics_csv(records: Sequence[MetricsRecord]) -> str:
    return _csv_text(METRIC_COLUMNS, ([getattr(r, c) for c in METRIC_COLUMNS] for r in records))


def summary_json(trace: SimTrace) -> str:
    doc = trace.summary.to_dict()
    # wall-clock time would break byte-identical reruns
    doc.pop("wall_time_s", None)
    doc["metric_notes"] = {
        "exploration": "proxy: mean distance of USVs from the swarm centroid",
        "exploitation": "proxy: mean distance of USVs from their own personal best",
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def read_metrics_csv(path: Path) -> list[MetricsRecord]:
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != METRIC_COLUMNS:
            raise ValueError(f"{path}: expected columns {','.join(METRIC_COLUMNS)}")
        for row in reader:
            opt = lambda k: float(row[k]) if row[k] != "" else None  # noqa: E731
            out.append(
                MetricsRecord(
                    t=int(row["t"]),
                    omega=float(row["omega"]),
                    avg_speed=float(row["avg_speed"]),
                    avg_min_dist=opt("avg_min_dist"),
                    coverage=float(row["coverage"]),
                    exploration=float(row["exploration"]),
                    exploitation=opt("exploitation"),
                )
            )
    return out


def write_files_atomically(out_dir: Path, files: dict[str, str]) -> list[Path]:
    """Write every file to a temp name first, then rename them all into place.

    Nothing appears in ``out_dir`` unless every write succeeded.
    """
    out_dir.mkdir(parents=True, exist_ok=True)
    staged: list[tuple[str, Path]] = []
    try:
        for name, text in files.items():
            fd, tmp = tempfile.mkstemp(prefix=f".{name}.", dir=out_dir)
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
            staged.append((tmp, out_dir / name))
    except BaseException:
        for tmp, _ in staged:
            Path(tmp).unlink(missing_ok=True)
        raise
    for tmp, dest in staged:
        os.replace(tmp, dest)
    return [dest for _, dest in staged]


def write_run(trace: SimTrace, out_dir: Path, summary: Optional[bool] = True) -> list[Path]:
    files = {"trajectories.csv": trajectories_csv(trace), "metrics.csv": metrics_csv(trace.metrics)}
    if summary:
        files["summary.json"] = summary_json(trace)
    return write_files_atomically(Path(out_dir), files)
