"""
DAO for liemaps files.

File formats:

    system.json       {"n", "terms": [{"target", "exponents", "coeff"}]}
    map.json          {"n", "order", "dt", "basis", "weights", "metadata"}
    report.json       any json object
    trajectory.csv    header "t,x1,...,xn", uniform t, optional "#" footer
    field.csv         header "x,u"
"""
from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from liemaps.models import Field, PolynomialMap, PolynomialSystem, TrajectoryDataset
from liemaps.utils import FormatError, logger

SPACING_TOLERANCE = 1e-9


class CsvStorage:
    """
    Read / write numeric CSV tables with a fixed header.

    Lines starting with "#" are comments. Can use as a context manager to
    stream rows:

    with CsvStorage(path, ["t", "x1"]) as rows:  # header written on enter
        rows.append([0.0, 1.0])                  # rows written on exit
    """

    def __init__(self, path: str | Path, header: list[str]):
        self.path = Path(path)
        self.header = header
        self.footer: str | None = None
        self._rows = None  # for use with context manager

    def records(self):
        """Yields (line number, row) for every non-comment, non-blank line."""
        with open(self.path, newline="") as file:
            for line_number, line in enumerate(file, start=1):
                if not line.strip() or line.lstrip().startswith("#"):
                    continue
                yield line_number, next(csv.reader([line]))

    def read(self) -> np.ndarray:
        """Reads all rows into a (rows, columns) array."""
        if not self.path.is_file():
            raise FormatError("File not found", location=str(self.path))
        records = self.records()
        header_line, header = next(records, (1, None))
        if header is None or [h.strip() for h in header] != self.header:
            raise FormatError(
                f"Expected header {','.join(self.header)}, got "
                f"{'' if header is None else ','.join(header)}",
                location=f"{self.path}:{header_line}",
            )
        rows = []
        for line_number, row in records:
            location = f"{self.path}:{line_number}"
            if len(row) != len(self.header):
                raise FormatError(
                    f"Expected {len(self.header)} columns, got {len(row)}",
                    location=location,
                )
            try:
                values = [float(value) for value in row]
            except ValueError as err:
                raise FormatError(str(err), location=location) from err
            if not all(np.isfinite(values)):
                raise FormatError("Non-finite value", location=location)
            rows.append(values)
        return np.array(rows, dtype=float).reshape(len(rows), len(self.header))

    def write(self, rows):
        """Writes header, rows and the optional footer comment."""
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, "w", newline="") as file:
            writer = csv.writer(file)
            writer.writerow(self.header)
            for row in rows:
                writer.writerow([repr(float(value)) for value in row])
            if self.footer:
                file.write(f"# {self.footer}\n")

    def __enter__(self) -> list:
        self._rows = []
        return self._rows

    def __exit__(self, _type, _value, exception):
        self.write(self._rows)
        if exception is not None:
            raise exception


class DAO:
    """
    Data access object for systems, maps, trajectories, fields and reports.
    """

    def __init__(self, path: str | Path = "."):
        """
        Args:
            path: directory relative paths are resolved against
        """
        self.root = Path(path)

    def _resolve(self, path: str | Path) -> Path:
        return self.root / Path(path)

    def read_json(self, path: str | Path) -> dict:
        """Loads a json file, reporting line and column of syntax errors."""
        path = self._resolve(path)
        if not path.is_file():
            raise FormatError("File not found", location=str(path))
        with open(path) as file:
            try:
                return json.load(file)
            except json.JSONDecodeError as err:
                raise FormatError(
                    err.msg, location=f"{path}:{err.lineno}:{err.colno}"
                ) from err

    def write_json(self, path: str | Path, data: dict) -> Path:
        """Dumps `data` as indented json."""
        path = self._resolve(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w") as file:
            json.dump(data, file, indent=2, allow_nan=False)
            file.write("\n")
        logger.info("Wrote %s", path)
        return path

    def read_system(self, path: str | Path) -> PolynomialSystem:
        """Reads a polynomial system."""
        return self._parse(path, PolynomialSystem)

    def write_system(self, path: str | Path, system: PolynomialSystem) -> Path:
        """Writes a polynomial system."""
        return self.write_json(path, system.to_dict())

    def read_map(self, path: str | Path) -> PolynomialMap:
        """Reads a polynomial map."""
        return self._parse(path, PolynomialMap)

    def write_map(self, path: str | Path, polymap: PolynomialMap) -> Path:
        """Writes a polynomial map."""
        return self.write_json(path, polymap.to_dict())

    def _parse(self, path, model):
        dictionary = self.read_json(path)
        try:
            return model.from_dict(dictionary)
        except FormatError as err:
            raise FormatError(str(err), location=str(self._resolve(path))) from err

    def read_trajectory(self, path: str | Path, n: int | None = None) -> TrajectoryDataset:
        """Reads a trajectory CSV with header t,x1,...,xn.

        Args:
            path: CSV file
            n: expected state dimension, taken from the header when None

        Raises:
            FormatError: bad header or values, fewer than 2 rows, or
                non-uniform / non-increasing t
        """
        path = self._resolve(path)
        if n is None:
            n = self._header_dimension(path)
        table = CsvStorage(path, trajectory_header(n)).read()
        if table.shape[0] < 2:
            raise FormatError(
                f"At least 2 samples are needed, got {table.shape[0]}", location=str(path)
            )
        times = table[:, 0]
        steps = np.diff(times)
        dt = (times[-1] - times[0]) / (len(times) - 1)
        if np.any(steps <= 0):
            raise FormatError("Column t is not strictly increasing", location=str(path))
        if np.any(np.abs(steps - dt) > SPACING_TOLERANCE * abs(dt)):
            raise FormatError("Column t is not uniformly spaced", location=str(path))
        return TrajectoryDataset(dt=dt, states=table[:, 1:], t0=times[0])

    @staticmethod
    def _header_dimension(path: Path) -> int:
        if not path.is_file():
            raise FormatError("File not found", location=str(path))
        header_line, header = next(CsvStorage(path, []).records(), (1, []))
        if len(header) < 2 or header[0].strip() != "t":
            raise FormatError(
                "Expected header t,x1,...,xn", location=f"{path}:{header_line}"
            )
        return len(header) - 1

    def write_trajectory(
        self, path: str | Path, data: TrajectoryDataset, footer: str | None = None
    ) -> Path:
        """Writes a trajectory CSV, with an optional "#" footer comment."""
        path = self._resolve(path)
        storage = CsvStorage(path, trajectory_header(data.n))
        storage.footer = footer
        with storage as rows:
            rows.extend(np.column_stack([data.times, data.states]))
        logger.info("Wrote %s", path)
        return path

    def read_field(self, path: str | Path, t: float = 0.0) -> Field:
        """Reads a field snapshot CSV."""
        table = CsvStorage(self._resolve(path), ["x", "u"]).read()
        return Field(x=table[:, 0], u=table[:, 1], t=t)

    def write_field(self, path: str | Path, field: Field) -> Path:
        """Writes a field snapshot CSV."""
        path = self._resolve(path)
        with CsvStorage(path, ["x", "u"]) as rows:
            rows.extend(np.column_stack([field.x, field.u]))
        logger.info("Wrote %s", path)
        return path


def trajectory_header(n: int) -> list[str]:
    """["t", "x1", ..., "xn"]."""
    return ["t"] + [f"x{i}" for i in range(1, n + 1)]
