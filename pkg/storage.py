import csv
import json
import logging
import os
from typing import Iterable, List, Optional, Sequence, Tuple

import attrs
import numpy as np

from errors import InputError
from utils.text import format_header, header_int, parse_header

logger = logging.getLogger(__name__)

RESULTS_FILE = os.getenv("SLIDENORM_RESULTS", "results.csv")
RESULTS_VERSION = 1
RESULT_COLUMNS = (
    "algo", "norm", "m", "n", "W", "eps", "seed",
    "estimate", "exact", "rel_error", "space_entries", "nonconforming",
)


def _prepare(path: str) -> None:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)


def _open_read(path: str):
    try:
        return open(path, "r", encoding="utf-8")
    except OSError as exc:
        raise OSError(f"{path}: {exc.strerror or exc}") from exc


# ---------- item streams ----------

def write_stream(path: str, items: Iterable[int], n: int, seed: int) -> None:
    items = np.asarray(list(items), dtype=np.int64)
    _prepare(path)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(format_header(n=n, m=len(items), seed=seed) + "\n")
        f.write("\n".join(str(int(v)) for v in items))
        f.write("\n")


def read_stream(path: str) -> Tuple[dict, np.ndarray]:
    with _open_read(path) as f:
        header = parse_header(f.readline().strip())
        n = header_int(header, "n")
        values = []
        for lineno, line in enumerate(f, start=2):
            line = line.strip()
            if not line:
                continue
            if not line.isdigit():
                raise InputError(f"{path}:{lineno}: expected an unsigned integer, got {line!r}")
            value = int(line)
            if not 1 <= value <= n:
                raise InputError(f"{path}:{lineno}: item {value} outside [1, {n}]")
            values.append(value)
    m = header_int(header, "m", len(values))
    if m != len(values):
        raise InputError(f"{path}: header says m={m} but the file holds {len(values)} updates")
    return {"n": n, "m": m, "seed": header_int(header, "seed", 0)}, np.asarray(values, dtype=np.int64)


# ---------- row streams ----------

def write_rows(path: str, A: np.ndarray, b: Optional[np.ndarray] = None) -> None:
    A = np.atleast_2d(A)
    _prepare(path)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(format_header(d=A.shape[1], response=int(b is not None)) + "\n")
        for i, row in enumerate(A):
            values = list(row) + ([b[i]] if b is not None else [])
            f.write(" ".join(repr(float(v)) for v in values) + "\n")


def read_rows(path: str) -> Tuple[np.ndarray, Optional[np.ndarray]]:
    with _open_read(path) as f:
        header = parse_header(f.readline().strip())
        d = header_int(header, "d")
        response = header_int(header, "response", 0) == 1
        width = d + int(response)
        rows = []
        for lineno, line in enumerate(f, start=2):
            if not line.strip():
                continue
            try:
                values = [float(v) for v in line.split()]
            except ValueError:
                raise InputError(f"{path}:{lineno}: non-numeric entry") from None
            if len(values) != width:
                raise InputError(f"{path}:{lineno}: expected {width} values, got {len(values)}")
            rows.append(values)
    data = np.asarray(rows, dtype=np.float64).reshape(-1, width)
    if response:
        return data[:, :d], data[:, d]
    return data, None


def write_coreset(path: str, coreset: Sequence) -> None:
    _prepare(path)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        if coreset:
            d = coreset[0].row.size
            extra = ["response"] if coreset[0].response is not None else []
            writer.writerow(["index", "p", "weight", *[f"a{j}" for j in range(d)], *extra])
        for row in coreset:
            writer.writerow(row.as_record())


# ---------- results ----------

def write_results(path: str, rows: List[dict]) -> None:
    _prepare(path)
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(f"# slidenorm results v{RESULTS_VERSION}\n")
        writer = csv.DictWriter(f, fieldnames=RESULT_COLUMNS)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: row.get(k, "") for k in RESULT_COLUMNS})


def read_results(path: str) -> List[dict]:
    with _open_read(path) as f:
        first = f.readline()
        if not first.startswith("# slidenorm results"):
            logger.warning("%s has no version header", path)
            f.seek(0)
        return list(csv.DictReader(f))


# ---------- run configs ----------

def save_config(path: str, config) -> None:
    _prepare(path)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(attrs.asdict(config), f, ensure_ascii=False, indent=2)


def load_config(path: str, cls):
    if not os.path.exists(path):
        raise InputError(f"{path}: no such config file")
    with open(path, "r", encoding="utf-8") as f:
        content = f.read().strip()
    try:
        data = json.loads(content)
    except json.JSONDecodeError:
        raise InputError(f"{path} contains invalid JSON") from None
    return cls(**data)
