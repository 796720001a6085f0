"""File formats: signal CSV and model JSON.

Signal CSV: header row ``t,ch0,ch1,...``, one row per sample, times in
seconds, UTF-8 with ``.`` as decimal separator. Model JSON: object with
keys A, B, C, D and optionally K as row-major nested arrays; dimensions are
inferred from the shapes.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .basis import SampledSignal
from .lti import StateSpaceModel


class FileFormatError(ValueError):
    """Malformed input file; the message carries the path and line number."""


def read_signal_csv(path) -> SampledSignal:
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise FileFormatError(f"{path}:1: empty file")
        if not header or header[0].strip() != "t":
            raise FileFormatError(f"{path}:1: header must be 't,ch0,ch1,...'")
        n_ch = len(header) - 1
        if n_ch < 1:
            raise FileFormatError(f"{path}:1: no signal channels in header")
        times: list[float] = []
        rows: list[list[float]] = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != n_ch + 1:
                raise FileFormatError(
                    f"{path}:{lineno}: expected {n_ch + 1} fields, got {len(row)}"
                )
            try:
                parsed = [float(v) for v in row]
            except ValueError as exc:
                raise FileFormatError(f"{path}:{lineno}: {exc}") from exc
            times.append(parsed[0])
            rows.append(parsed[1:])
    if not times:
        raise FileFormatError(f"{path}: no samples")
    try:
        return SampledSignal(np.asarray(times), np.asarray(rows).T)
    except ValueError as exc:
        raise FileFormatError(f"{path}: {exc}") from exc


def write_signal_csv(path, signal: SampledSignal) -> None:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t"] + [f"ch{i}" for i in range(signal.n_f)])
        for k in range(signal.n_samples):
            writer.writerow(
                [f"{signal.times[k]:.17g}"]
                + [f"{signal.values[i, k]:.17g}" for i in range(signal.n_f)]
            )


def read_model_json(path) -> StateSpaceModel:
    path = Path(path)
    try:
        with path.open(encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{path}:{exc.lineno}: {exc.msg}") from exc
    return model_from_dict(data, source=str(path))


def model_from_dict(data, source: str = "model") -> StateSpaceModel:
    if not isinstance(data, dict):
        raise FileFormatError(f"{source}: model must be a JSON object")
    missing = [k for k in ("A", "B", "C", "D") if k not in data]
    if missing:
        raise FileFormatError(f"{source}: missing model keys {missing}")
    try:
        return StateSpaceModel(
            A=np.asarray(data["A"], dtype=float),
            B=np.asarray(data["B"], dtype=float),
            C=np.asarray(data["C"], dtype=float),
            D=np.asarray(data["D"], dtype=float),
            K=np.asarray(data["K"], dtype=float) if data.get("K") is not None else None,
        )
    except (ValueError, TypeError) as exc:
        raise FileFormatError(f"{source}: {exc}") from exc


def write_model_json(path, model: StateSpaceModel) -> None:
    path = Path(path)
    payload = {
        "A": model.A.tolist(),
        "B": model.B.tolist(),
        "C": model.C.tolist(),
        "D": model.D.tolist(),
        "K": model.K.tolist(),
    }
    with path.open("w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
