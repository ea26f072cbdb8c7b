"""Dataset schema, instance storage and CSV ingestion.

A :class:`Dataset` keeps every cell in one float matrix. Numeric cells hold
their value, nominal cells hold the index of their category in the
attribute's ``nominal_values`` and missing cells hold ``NaN``. The matrix is
made read-only on construction, so datasets can be shared freely; every
transformation returns a new instance.
"""
from __future__ import annotations

import csv
import hashlib
import io
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DataValidationError, ParseError, SchemaError

NUMERIC = "numeric"
NOMINAL = "nominal"
MISSING_TOKENS = frozenset({"", "?"})

PIMA_LABEL_ORDER = ("tested_positive", "tested_negative")
PIMA_CLASS_MAP = {"1": "tested_positive", "0": "tested_negative"}

# '.' as decimal separator only; no nan/inf spellings
_NUMBER = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$")


@dataclass(frozen=True)
class AttributeSpec:
    name: str
    kind: str
    nominal_values: tuple[str, ...] = ()
    index: int = 0

    def __post_init__(self):
        if self.kind == NUMERIC and self.nominal_values:
            raise SchemaError(f"numeric attribute {self.name!r} cannot carry categories")
        if self.kind == NOMINAL:
            if len(set(self.nominal_values)) != len(self.nominal_values):
                raise SchemaError(f"duplicate categories in {self.name!r}")
        elif self.kind != NUMERIC:
            raise SchemaError(f"unknown attribute kind {self.kind!r}")

    @property
    def is_numeric(self) -> bool:
        return self.kind == NUMERIC

    @property
    def is_nominal(self) -> bool:
        return self.kind == NOMINAL


@dataclass(frozen=True)
class ClassDistribution:
    labels: tuple[str, ...]
    counts: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.counts)

    def as_dict(self) -> dict[str, int]:
        return dict(zip(self.labels, self.counts))


@dataclass(frozen=True, eq=False)
class Dataset:
    """Schema plus an ``(n_instances, n_attributes)`` cell matrix."""

    attributes: tuple[AttributeSpec, ...]
    class_index: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        attrs = tuple(self.attributes)
        object.__setattr__(self, "attributes", attrs)
        names = [a.name for a in attrs]
        if len(set(names)) != len(names):
            raise SchemaError("attribute names must be unique")
        for i, a in enumerate(attrs):
            if a.index != i:
                raise SchemaError(f"attribute {a.name!r} has index {a.index}, expected {i}")
        if not 0 <= self.class_index < len(attrs):
            raise SchemaError("class index out of range")
        if not attrs[self.class_index].is_nominal:
            raise SchemaError("class attribute must be nominal")

        values = np.array(self.values, dtype=float)
        if values.ndim != 2 or values.shape[1] != len(attrs):
            raise DataValidationError(
                f"cell matrix shape {values.shape} does not match {len(attrs)} attributes"
            )
        for a in attrs:
            col = values[:, a.index]
            known = col[~np.isnan(col)]
            if a.is_nominal:
                bad = (known < 0) | (known >= len(a.nominal_values)) | (known != np.floor(known))
                if bad.any():
                    raise DataValidationError(f"invalid category index in {a.name!r}")
            elif np.isinf(known).any():
                raise DataValidationError(f"non-finite value in {a.name!r}")
        if np.isnan(values[:, self.class_index]).any():
            row = int(np.flatnonzero(np.isnan(values[:, self.class_index]))[0])
            raise DataValidationError(f"missing class value at instance {row}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.values.shape[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            self.attributes == other.attributes
            and self.class_index == other.class_index
            and self.values.shape == other.values.shape
            and np.array_equal(self.values, other.values, equal_nan=True)
        )

    __hash__ = None

    @property
    def n_instances(self) -> int:
        return len(self)

    @property
    def class_attribute(self) -> AttributeSpec:
        return self.attributes[self.class_index]

    @property
    def class_labels(self) -> tuple[str, ...]:
        return self.class_attribute.nominal_values

    @property
    def n_classes(self) -> int:
        return len(self.class_labels)

    @property
    def y(self) -> np.ndarray:
        """Class label indices as an int array."""
        return self.values[:, self.class_index].astype(int)

    @property
    def feature_indices(self) -> list[int]:
        return [a.index for a in self.attributes if a.index != self.class_index]

    @property
    def features(self) -> list[AttributeSpec]:
        return [self.attributes[i] for i in self.feature_indices]

    def attribute(self, name: str) -> AttributeSpec:
        for a in self.attributes:
            if a.name == name:
                return a
        raise SchemaError(f"no attribute named {name!r}")

    def column(self, name_or_index) -> np.ndarray:
        idx = name_or_index if isinstance(name_or_index, int) else self.attribute(name_or_index).index
        return self.values[:, idx]

    def instance(self, i: int) -> np.ndarray:
        return self.values[i]

    def fingerprint(self) -> str:
        """Short hash of the schema (names, kinds, categories, class position)."""
        h = hashlib.sha256()
        for a in self.attributes:
            h.update(f"{a.name}|{a.kind}|{','.join(a.nominal_values)};".encode())
        h.update(str(self.class_index).encode())
        return h.hexdigest()[:16]

    def same_schema(self, other: "Dataset") -> bool:
        return self.attributes == other.attributes and self.class_index == other.class_index

    def has_missing(self) -> bool:
        return bool(np.isnan(self.values).any())

    def with_values(self, values: np.ndarray) -> "Dataset":
        return Dataset(self.attributes, self.class_index, values)

    def subset(self, rows: Iterable[int]) -> "Dataset":
        rows = np.asarray(list(rows) if not isinstance(rows, np.ndarray) else rows, dtype=int)
        return Dataset(self.attributes, self.class_index, self.values[rows])

    def shuffled(self, seed: int) -> "Dataset":
        from .jrandom import shuffled_order

        return self.subset(np.array(shuffled_order(len(self), seed), dtype=int))

    def select(self, names_or_indices: Sequence) -> "Dataset":
        """Keep the given predictor attributes (in schema order) plus the class."""
        keep = set()
        for x in names_or_indices:
            keep.add(x if isinstance(x, (int, np.integer)) else self.attribute(x).index)
        keep.discard(self.class_index)
        cols = sorted(keep | {self.class_index})
        attrs = []
        for new_i, old_i in enumerate(cols):
            a = self.attributes[old_i]
            attrs.append(AttributeSpec(a.name, a.kind, a.nominal_values, new_i))
        return Dataset(tuple(attrs), cols.index(self.class_index), self.values[:, cols])


def _is_number(cell: str) -> bool:
    return bool(_NUMBER.match(cell))


def parse_csv(
    text: str,
    class_column: str = "last",
    *,
    label_order: Sequence[str] | None = None,
    class_map: Mapping[str, str] | None = None,
    zeros_as_missing: Sequence[str] = (),
) -> Dataset:
    """Parse a CSV document with a header row into a :class:`Dataset`.

    Parameters
    ----------
    text : str
        The CSV document. LF and CRLF line endings are both accepted.
    class_column : str
        Name of the class column, or ``"last"``.
    label_order : sequence of str, optional
        Pin the class label order. Labels not present in the data are still
        part of the schema. By default labels are ordered by first appearance.
    class_map : mapping, optional
        Rename raw class cells (e.g. ``{"1": "tested_positive"}``) before the
        schema is built.
    zeros_as_missing : sequence of str
        Numeric columns whose literal ``0`` cells should become missing.
    """
    rows = list(csv.reader(io.StringIO(text)))
    while rows and not any(c.strip() for c in rows[-1]):
        rows.pop()
    if not rows:
        raise ParseError("empty document")
    header = [h.strip() for h in rows[0]]
    if any(not h for h in header):
        raise ParseError("header contains an empty column name")
    if len(set(header)) != len(header):
        raise ParseError("header column names must be unique")
    body = rows[1:]
    if not body:
        raise ParseError("no data rows")

    width = len(header)
    cells: list[list[str]] = []
    for lineno, row in enumerate(body, start=2):
        if len(row) != width:
            raise ParseError(f"row {lineno}: expected {width} cells, found {len(row)}")
        cells.append([c.strip() for c in row])

    if class_column == "last":
        cidx = width - 1
    elif class_column in header:
        cidx = header.index(class_column)
    else:
        raise SchemaError(f"class column {class_column!r} not found in header")
    for z in zeros_as_missing:
        if z not in header:
            raise SchemaError(f"zeros-as-missing column {z!r} not found in header")

    for lineno, row in enumerate(cells, start=2):
        if row[cidx] in MISSING_TOKENS:
            raise DataValidationError(f"row {lineno}: class value is missing")
        if class_map is not None:
            row[cidx] = class_map.get(row[cidx], row[cidx])

    attrs: list[AttributeSpec] = []
    columns: list[np.ndarray] = []
    for j, name in enumerate(header):
        col = [row[j] for row in cells]
        present = [c for c in col if c not in MISSING_TOKENS]
        if j != cidx and present and all(_is_number(c) for c in present):
            arr = np.array([np.nan if c in MISSING_TOKENS else float(c) for c in col])
            if name in zeros_as_missing:
                arr[arr == 0] = np.nan
            attrs.append(AttributeSpec(name, NUMERIC, (), j))
        else:
            if j == cidx and label_order is not None:
                order = list(label_order)
                unknown = sorted(set(present) - set(order))
                if unknown:
                    raise DataValidationError(f"class labels {unknown} not in label order")
            else:
                order = list(dict.fromkeys(present))
            if j == cidx and len(order) < 2:
                # schema needs two labels; a single observed label is padded
                order.append(f"not_{order[0]}")
            lookup = {v: k for k, v in enumerate(order)}
            arr = np.array([np.nan if c in MISSING_TOKENS else lookup[c] for c in col], dtype=float)
            attrs.append(AttributeSpec(name, NOMINAL, tuple(order), j))
        columns.append(arr)
    return Dataset(tuple(attrs), cidx, np.column_stack(columns))


def _format_number(x: float) -> str:
    if float(x).is_integer() and abs(x) < 1e15:
        return str(int(x))
    return repr(float(x))


def to_csv(d: Dataset) -> str:
    """Serialize a dataset so that :func:`parse_csv` restores it exactly.

    Missing cells are written as ``?``. A nominal predictor whose cells are
    all numeric-looking would be re-inferred as numeric, which is the one
    round-trip this format cannot preserve.
    """
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([a.name for a in d.attributes])
    for row in d.values:
        out = []
        for a, v in zip(d.attributes, row):
            if np.isnan(v):
                out.append("?")
            elif a.is_nominal:
                out.append(a.nominal_values[int(v)])
            else:
                out.append(_format_number(v))
        w.writerow(out)
    return buf.getvalue()


def class_distribution(d: Dataset) -> ClassDistribution:
    counts = np.bincount(d.y, minlength=d.n_classes)
    return ClassDistribution(d.class_labels, tuple(int(c) for c in counts))


def sha256_of(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def load_csv(path: str | Path, class_column: str = "last", **kwargs) -> Dataset:
    path = Path(path)
    text = path.read_bytes().decode("utf-8-sig")
    return parse_csv(text, class_column, **kwargs)


def pima_path() -> Path:
    """Location of the bundled Pima Indians Diabetes CSV."""
    return Path(str(resources.files("classmine") / "data" / "pima_diabetes.csv"))


def pima_checksum() -> str:
    """Expected SHA-256 of the bundled Pima file (from its sidecar)."""
    sidecar = pima_path().with_suffix(".csv.sha256")
    return sidecar.read_text().split()[0]


def load_pima(*, verify: bool = True, **kwargs) -> Dataset:
    """Load the bundled Pima dataset, labels ordered (tested_positive, tested_negative)."""
    path = pima_path()
    if verify and sha256_of(path) != pima_checksum():
        raise DataValidationError(f"checksum mismatch for {path}")
    kwargs.setdefault("label_order", PIMA_LABEL_ORDER)
    kwargs.setdefault("class_map", PIMA_CLASS_MAP)
    return load_csv(path, **kwargs)
