"""Catalog files (``.nfcat.json``), DS list import and CSV export.

Catalog layout::

    {"version": 1,
     "records": [{"kind": "NF", "group": "Z8xZ2",
                  "sets": {"S": [[0, 0], ...], "T": [...]},
                  "params": {"s": 5, "t": 9, "lambda": 3},
                  "symmetric": false,
                  "provenance": {"method": "search", "source": "...", "timestamp": "..."}}]}

Elements are coordinate lists; a bare integer is accepted on input for
cyclic presentations.  Every record is re-verified on load and before save.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import jsonschema

from .constructions import ConstructionError, SeedDesign
from .group_ring import NearFactorization, NotANearFactorization
from .groups import Group, GroupSyntaxError, is_symmetric, parse_group

__all__ = [
    "CATALOG_VERSION",
    "CatalogError",
    "CatalogRecord",
    "LoadResult",
    "record_from_nf",
    "record_from_seed",
    "save",
    "load",
    "load_builtin",
    "import_ds_list",
    "DSListError",
    "export_csv",
    "CSV_HEADER",
]

CATALOG_VERSION = 1
CSV_HEADER = ["n", "group", "s", "t", "lambda", "symmetric", "method"]

_ELEMENT = {"oneOf": [{"type": "integer"}, {"type": "array", "items": {"type": "integer"}}]}
SCHEMA = {
    "type": "object",
    "required": ["version", "records"],
    "properties": {
        "version": {"type": "integer"},
        "records": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["kind", "group", "sets"],
                "properties": {
                    "id": {"type": "string"},
                    "kind": {"enum": ["NF", "DS", "PDS"]},
                    "group": {"type": "string"},
                    "sets": {"type": "object", "additionalProperties": {"type": "array", "items": _ELEMENT}},
                    "params": {"type": "object", "additionalProperties": {"type": "integer"}},
                    "symmetric": {"type": "boolean"},
                    "provenance": {"type": "object"},
                },
            },
        },
    },
}


class CatalogError(ValueError):
    pass


@dataclass(frozen=True)
class CatalogRecord:
    kind: str
    group: Group
    sets: dict[str, tuple[int, ...]]
    params: dict[str, int]
    symmetric: bool
    provenance: dict = field(default_factory=dict, compare=False)
    id: str = ""

    def verify(self) -> CatalogRecord:
        """Check the sets against the matching group-ring equation."""
        obj = self.to_object()
        if isinstance(obj, NearFactorization):
            got = {"s": obj.s, "t": obj.t, "lambda": obj.lam}
            sym = obj.symmetric
        else:
            got = dict(zip(("v", "k", "lambda", "mu"), obj.params))
            sym = obj.symmetric
        if self.params and self.params != got:
            raise CatalogError(f"parameters {self.params} do not match verified {got}")
        if sym != self.symmetric:
            raise CatalogError(f"symmetric flag {self.symmetric} but sets give {sym}")
        return self

    def to_object(self) -> NearFactorization | SeedDesign:
        try:
            if self.kind == "NF":
                return NearFactorization(self.group, self.sets["S"], self.sets["T"])
            return SeedDesign(self.kind, self.group, self.sets["D"], source=self.provenance.get("method", "catalog"))
        except KeyError as exc:
            raise CatalogError(f"{self.kind} record lacks set {exc}") from None
        except (NotANearFactorization, ConstructionError, ValueError) as exc:
            raise CatalogError(str(exc)) from None

    def to_json(self) -> dict:
        out = {}
        if self.id:
            out["id"] = self.id
        out.update(
            kind=self.kind,
            group=self.group.name,
            sets={k: [list(self.group.coords(x)) for x in v] for k, v in self.sets.items()},
            params=dict(self.params),
            symmetric=self.symmetric,
            provenance=dict(self.provenance),
        )
        return out

    @classmethod
    def from_json(cls, rec: dict) -> CatalogRecord:
        try:
            G = parse_group(rec["group"])
        except GroupSyntaxError as exc:
            raise CatalogError(str(exc)) from None
        sets = {}
        for name, elems in rec["sets"].items():
            try:
                sets[name] = tuple(sorted(G.element_from_json(e) for e in elems))
            except ValueError as exc:
                raise CatalogError(f"set {name}: {exc}") from None
            if len(set(sets[name])) != len(sets[name]):
                raise CatalogError(f"set {name} repeats an element")
        sym = rec.get("symmetric")
        if sym is None:
            sym = all(is_symmetric(G, v) for v in sets.values())
        return cls(
            kind=rec["kind"],
            group=G,
            sets=sets,
            params=dict(rec.get("params", {})),
            symmetric=bool(sym),
            provenance=dict(rec.get("provenance", {})),
            id=rec.get("id", ""),
        )

    @property
    def method(self) -> str:
        return self.provenance.get("method", "")


def _now() -> str:
    return datetime.now(timezone.utc).replace(microsecond=0).isoformat()


def record_from_nf(nf: NearFactorization, method: str, source: str = "", id: str = "") -> CatalogRecord:
    return CatalogRecord(
        "NF",
        nf.group,
        {"S": nf.S, "T": nf.T},
        {"s": nf.s, "t": nf.t, "lambda": nf.lam},
        nf.symmetric,
        {"method": method, "source": source, "timestamp": _now()},
        id,
    )


def record_from_seed(seed: SeedDesign, method: str | None = None, source: str = "", id: str = "") -> CatalogRecord:
    return CatalogRecord(
        seed.kind,
        seed.group,
        {"D": seed.D},
        dict(zip(("v", "k", "lambda", "mu"), seed.params)),
        seed.symmetric,
        {"method": method or seed.source, "source": source, "timestamp": _now()},
        id,
    )


def save(records: Iterable[CatalogRecord], path: str | Path) -> None:
    recs = [r.verify() for r in records]
    # one record per line keeps diffs of catalog files readable
    lines = ",\n".join("  " + json.dumps(r.to_json(), separators=(",", ":")) for r in recs)
    body = f'{{"version": {CATALOG_VERSION}, "records": [\n{lines}\n]}}\n' if recs else f'{{"version": {CATALOG_VERSION}, "records": []}}\n'
    Path(path).write_text(body)


@dataclass
class LoadResult:
    records: list[CatalogRecord]
    errors: list[tuple[int, str]]

    def __iter__(self):
        return iter(self.records)

    def __len__(self) -> int:
        return len(self.records)


def _parse_document(doc) -> LoadResult:
    if not isinstance(doc, dict) or "version" not in doc:
        raise CatalogError("catalog document lacks a version field")
    if doc["version"] != CATALOG_VERSION:
        raise CatalogError(f"unsupported catalog version {doc['version']!r} (expected {CATALOG_VERSION})")
    try:
        jsonschema.validate(doc, SCHEMA)
    except jsonschema.ValidationError as exc:
        raise CatalogError(f"schema violation: {exc.message}") from None
    records, errors = [], []
    for i, raw in enumerate(doc["records"]):
        try:
            records.append(CatalogRecord.from_json(raw).verify())
        except CatalogError as exc:
            errors.append((i, str(exc)))
    return LoadResult(records, errors)


def load(path: str | Path) -> LoadResult:
    """Load and re-verify a catalog; bad records are listed in ``errors``."""
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise CatalogError(f"{path}: invalid JSON ({exc})") from None
    return _parse_document(doc)


def load_builtin() -> list[CatalogRecord]:
    text = resources.files("nearfact").joinpath("data/builtin.nfcat.json").read_text()
    res = _parse_document(json.loads(text))
    if res.errors:
        raise CatalogError(f"builtin catalog has invalid records: {res.errors}")
    return res.records


class DSListError(ValueError):
    def __init__(self, problems: Sequence[str]):
        super().__init__("; ".join(problems))
        self.problems = list(problems)


def _parse_ds_lines(text: str, G: Group) -> list[tuple[int, list]]:
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        elems = []
        for tok in line.split(";"):
            tok = tok.strip().strip("()")
            if not tok:
                continue
            try:
                elems.append([int(c) for c in tok.split(",")])
            except ValueError:
                raise DSListError([f"line {lineno}: cannot parse element {tok!r}"]) from None
        out.append((lineno, elems))
    return out


def import_ds_list(path: str | Path, group_spec: str | Group) -> list[SeedDesign]:
    """Read candidate difference sets and verify each one.

    Text format: one set per line, elements separated by ``;`` and
    coordinates by ``,``.  A JSON list of sets is also accepted.
    """
    G = group_spec if isinstance(group_spec, Group) else parse_group(group_spec)
    text = Path(path).read_text()
    if text.lstrip().startswith("["):
        entries = list(enumerate(json.loads(text), 1))
        label = "set"
    else:
        entries = _parse_ds_lines(text, G)
        label = "line"
    seeds, problems = [], []
    for where, elems in entries:
        try:
            idx = [G.element_from_json(e) for e in elems]
        except ValueError as exc:
            problems.append(f"{label} {where}: {exc}")
            continue
        try:
            seeds.append(SeedDesign("DS", G, tuple(idx), source="ingested"))
        except ConstructionError as exc:
            problems.append(f"{label} {where}: verification failed ({exc})")
    if problems:
        raise DSListError(problems)
    return seeds


def export_csv(records: Iterable[CatalogRecord], stream: io.TextIOBase | None = None) -> str:
    """CSV rows for the NF records (``n,group,s,t,lambda,symmetric,method``)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        if r.kind != "NF":
            continue
        p = r.params
        w.writerow([r.group.order, r.group.name, p["s"], p["t"], p["lambda"], "yes" if r.symmetric else "no", r.method])
    text = buf.getvalue()
    if stream is not None:
        stream.write(text)
    return text
