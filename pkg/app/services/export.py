"""Trajectory emission (CSV/JSON) and CSV re-import for offline checks."""

import logging
import math
from pathlib import Path

import numpy as np

from app.core.exceptions import ExportError
from app.models import (
    EmitFormat,
    QpStatus,
    RunManifest,
    ScenarioConfig,
    TrajectoryDocument,
    TrajectoryLog,
    TrajectoryRecord,
)
from app.services.reference import build_reference

logger = logging.getLogger(__name__)

INPUT_COLUMNS = 5
CSV_HEADER = (
    "t,x,y,z,r,h,psi1,"
    + ",".join(f"u{i}" for i in range(1, INPUT_COLUMNS + 1))
    + ","
    + ",".join(f"unom{i}" for i in range(1, INPUT_COLUMNS + 1))
    + ",qp_active,qp_status"
)
_FLOAT_COLUMNS = 7 + 2 * INPUT_COLUMNS
CSV_FORMAT = ["%.17g"] * _FLOAT_COLUMNS + ["%d", "%s"]


def _padded(values: tuple[float, ...]) -> list[float]:
    return list(values[:INPUT_COLUMNS]) + [0.0] * (INPUT_COLUMNS - len(values))


def trajectory_rows(log: TrajectoryLog) -> list[list[object]]:
    """One CSV row per record, columns in ``CSV_HEADER`` order."""
    rows: list[list[object]] = []
    for rec in log.records:
        rows.append(
            [
                rec.t,
                *rec.position,
                rec.r,
                rec.h,
                math.nan if rec.psi1 is None else rec.psi1,
                *_padded(rec.u_star),
                *_padded(rec.u_nom),
                int(rec.constraint_active),
                rec.qp_status.value,
            ]
        )
    return rows


def write_trajectory_csv(log: TrajectoryLog, path: Path) -> Path:
    rows = np.array(trajectory_rows(log), dtype=object).reshape(-1, len(CSV_FORMAT))
    try:
        with open(path, "w", encoding="utf-8", newline="") as f:
            np.savetxt(f, rows, fmt=CSV_FORMAT, delimiter=",", header=CSV_HEADER, comments="")
    except OSError as exc:
        raise ExportError(str(path), exc.strerror or str(exc)) from exc
    return path


def write_trajectory_json(log: TrajectoryLog, path: Path) -> Path:
    document = TrajectoryDocument.from_log(log)
    try:
        path.write_text(document.model_dump_json(indent=2), encoding="utf-8")
    except OSError as exc:
        raise ExportError(str(path), exc.strerror or str(exc)) from exc
    return path


def write_trajectory(log: TrajectoryLog, manifest: RunManifest) -> list[Path]:
    """
    Emit ``log`` in every format the manifest asks for.

    Files are named after the scenario inside ``manifest.output_dir``.

    Raises:
        ExportError: The directory cannot be created or a file cannot be written
    """
    out_dir = Path(manifest.output_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ExportError(str(out_dir), exc.strerror or str(exc)) from exc

    written: list[Path] = []
    for fmt in manifest.concrete_formats:
        if fmt is EmitFormat.CSV:
            written.append(write_trajectory_csv(log, out_dir / f"{log.scenario}.csv"))
        else:
            written.append(write_trajectory_json(log, out_dir / f"{log.scenario}.json"))
    logger.info("Wrote %s", ", ".join(str(p) for p in written))
    return written


def read_trajectory_csv(path: str | Path, config: ScenarioConfig | None = None) -> TrajectoryLog:
    """
    Rebuild a log from an emitted CSV.

    Only the columns of the CSV survive: the state is the position, and the
    reference is re-evaluated from ``config`` when given (the position itself
    otherwise). L_max is taken from ``config`` or inferred from r + h.

    Raises:
        ExportError: Missing file or a header that does not match ``CSV_HEADER``
    """
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as f:
            header = f.readline().strip()
    except OSError as exc:
        raise ExportError(str(path), exc.strerror or str(exc)) from exc
    if header != CSV_HEADER:
        raise ExportError(str(path), "header does not match the trajectory schema")

    table = np.atleast_1d(
        np.genfromtxt(path, delimiter=",", names=True, dtype=None, encoding="utf-8")
    )
    reference = build_reference(config) if config is not None else None
    records: list[TrajectoryRecord] = []
    for row in table:
        position = (float(row["x"]), float(row["y"]), float(row["z"]))
        psi1 = float(row["psi1"])
        records.append(
            TrajectoryRecord(
                t=float(row["t"]),
                state=position,
                position=position,
                reference=reference.at(float(row["t"])).position if reference else position,
                u_star=tuple(float(row[f"u{i}"]) for i in range(1, INPUT_COLUMNS + 1)),
                u_nom=tuple(float(row[f"unom{i}"]) for i in range(1, INPUT_COLUMNS + 1)),
                h=float(row["h"]),
                psi1=None if math.isnan(psi1) else psi1,
                r=float(row["r"]),
                constraint_active=bool(int(row["qp_active"])),
                qp_status=QpStatus(str(row["qp_status"])),
            )
        )

    if config is not None:
        l_max = config.cbf.l_max
    elif records:
        l_max = records[0].r + records[0].h
    else:
        l_max = math.nan
    scenario = config.name if config is not None else path.stem
    return TrajectoryLog(scenario=scenario, config=config, l_max=l_max, records=records)
