"""Bundled reference data, the invariant ledger, run reports and the on-disk memo cache."""

from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Iterable, Mapping

from filelock import FileLock

from .errors import ConfigurationError, MissingEntryError, ParseError
from .invariants import InvariantDescriptor, InvariantValue, Provenance
from .real import RealSurfaceModel, catalog_model, load_model

CACHE_ENV = "WKIT_CACHE"
CACHE_NAME = "wkit-cache.jsonl"


def _read_json(name: str) -> Any:
    return json.loads(resources.files("wkit.data").joinpath(name).read_text())


# -- bundled data ----------------------------------------------------------


@dataclass(frozen=True)
class Table1Column:
    model: RealSurfaceModel
    w1: int
    gw1: int

    @property
    def label(self) -> str:
        return f"deg {self.model.degree}, {self.model.rx}"


@dataclass
class BundledData:
    table1: list[Table1Column]
    example_bh: list[RealSurfaceModel]

    @classmethod
    def load(cls) -> BundledData:
        doc = _read_json("table1.json")
        cols = [
            Table1Column(catalog_model(c["degree"], c["rx"]), int(c["W1"]), int(c["GW1"]))
            for c in doc["columns"]
        ]
        bh = [load_model(m) for m in _read_json("bh_examples.json")["models"]]
        return cls(cols, bh)

    def model(self, degree: int, rx: str) -> RealSurfaceModel:
        """Catalog model with bundled bh data attached when available."""
        base = catalog_model(degree, rx)
        for m in self.example_bh:
            if m.lattice == base.lattice and m.components == base.components:
                return base.with_bh(m.bh_table)
        return base

    def table1_ledger(self) -> InvariantLedger:
        from .reductions import table1_descriptor

        ledger = InvariantLedger()
        for col in self.table1:
            ledger.put(table1_descriptor(col.model).key(), col.w1, Provenance.ORACLE)
        return ledger


# -- ledger ----------------------------------------------------------------


class InvariantLedger:
    """Descriptor key -> (exact value, provenance)."""

    FIELDS = ("key", "value", "provenance")

    def __init__(self, entries: Mapping[str, tuple[int, Provenance]] | None = None):
        self._entries: dict[str, tuple[int, Provenance]] = dict(entries or {})

    def put(self, key: str | InvariantDescriptor, value: int, provenance: Provenance):
        if isinstance(key, InvariantDescriptor):
            key = key.key()
        self._entries[key] = (int(value), Provenance(provenance))

    def record(self, inv: InvariantValue):
        if inv.descriptor is None:
            raise ValueError("only values with a descriptor can be recorded")
        self.put(inv.descriptor, inv.value, inv.provenance)

    def get(self, key: str | InvariantDescriptor) -> tuple[int, Provenance]:
        if isinstance(key, InvariantDescriptor):
            key = key.key()
        try:
            return self._entries[key]
        except KeyError:
            raise MissingEntryError(f"no ledger entry for {key}") from None

    def lookup(self, desc: InvariantDescriptor) -> int:
        return self.get(desc)[0]

    def __contains__(self, key: object) -> bool:
        if isinstance(key, InvariantDescriptor):
            key = key.key()
        return key in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, InvariantLedger) and self._entries == other._entries

    def rows(self) -> list[dict[str, str]]:
        return [
            {"key": k, "value": str(v), "provenance": p.value}
            for k, (v, p) in sorted(self._entries.items())
        ]

    def to_json(self) -> str:
        return json.dumps({"entries": self.rows()}, indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=self.FIELDS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(self.rows())
        return buf.getvalue()

    @classmethod
    def from_rows(cls, rows: Iterable[Mapping[str, str]]) -> InvariantLedger:
        ledger = cls()
        for row in rows:
            try:
                prov = Provenance(row.get("provenance") or Provenance.ORACLE.value)
                ledger.put(row["key"], int(str(row["value"])), prov)
            except (KeyError, ValueError) as exc:
                raise ParseError(f"bad ledger row {dict(row)}: {exc}") from None
        return ledger

    @classmethod
    def from_json(cls, text: str) -> InvariantLedger:
        doc = json.loads(text)
        rows = doc["entries"] if isinstance(doc, dict) else doc
        return cls.from_rows(rows)

    @classmethod
    def from_csv(cls, text: str) -> InvariantLedger:
        return cls.from_rows(csv.DictReader(io.StringIO(text)))

    @classmethod
    def load(cls, path: str | Path) -> InvariantLedger:
        path = Path(path)
        if not path.exists():
            raise ConfigurationError(f"oracle file {path} does not exist")
        text = path.read_text()
        return cls.from_csv(text) if path.suffix == ".csv" else cls.from_json(text)


# -- run report ------------------------------------------------------------


@dataclass
class RunReport:
    descriptor: str
    value: int | None
    provenance: str | None
    flags: dict[str, bool | None] = field(default_factory=dict)
    timing: float = 0.0
    cache: dict[str, int] = field(default_factory=dict)
    issues: list[str] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return {
            "descriptor": self.descriptor,
            "value": None if self.value is None else str(self.value),
            "provenance": self.provenance,
            "flags": dict(self.flags),
            "timing": round(self.timing, 6),
            "cache": {k: str(v) for k, v in self.cache.items()},
            "issues": list(self.issues),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any]) -> RunReport:
        return cls(
            descriptor=doc["descriptor"],
            value=None if doc["value"] is None else int(doc["value"]),
            provenance=doc["provenance"],
            flags=dict(doc.get("flags", {})),
            timing=float(doc.get("timing", 0.0)),
            cache={k: int(v) for k, v in doc.get("cache", {}).items()},
            issues=list(doc.get("issues", [])),
        )

    @classmethod
    def from_json(cls, text: str) -> RunReport:
        return cls.from_dict(json.loads(text))

    def __post_init__(self):
        self.timing = round(self.timing, 6)


# -- persistent cache ------------------------------------------------------


def cache_dir(cli_value: str | None) -> Path | None:
    """The environment variable wins over the command-line value."""
    chosen = os.environ.get(CACHE_ENV) or cli_value
    return Path(chosen) if chosen else None


class CacheFile:
    """Append-only JSON-lines memo cache, shared between processes via a file lock.

    Each line is ``{"key", "value", "ruleset"}``; lines written under another
    rule set hash are ignored on load, so a changed rule file never sees
    stale values.
    """

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        self.path = self.directory / CACHE_NAME
        self._lock = FileLock(str(self.path) + ".lock")

    def _lines(self) -> list[dict[str, str]]:
        if not self.path.exists():
            return []
        out = []
        for n, line in enumerate(self.path.read_text().splitlines(), 1):
            if not line.strip():
                continue
            try:
                out.append(json.loads(line))
            except json.JSONDecodeError:
                raise ConfigurationError(f"{self.path}:{n} is not valid JSON") from None
        return out

    def load(self, ruleset_hash: str) -> dict[str, int]:
        with self._lock:
            return {
                rec["key"]: int(rec["value"])
                for rec in self._lines()
                if rec.get("ruleset") == ruleset_hash
            }

    def append(self, entries: Iterable[tuple[str, int]], ruleset_hash: str):
        entries = list(entries)
        if not entries:
            return
        self.directory.mkdir(parents=True, exist_ok=True)
        with self._lock, self.path.open("a") as fh:
            for key, value in entries:
                fh.write(json.dumps({"key": key, "value": str(value), "ruleset": ruleset_hash}) + "\n")

    def sink(self, ruleset_hash: str):
        return lambda key, value: self.append([(key, value)], ruleset_hash)

    def stats(self) -> dict[str, int]:
        with self._lock:
            lines = self._lines()
        rulesets = {rec.get("ruleset") for rec in lines}
        return {"entries": len(lines), "rulesets": len(rulesets)}

    def clear(self, ruleset_hash: str | None = None) -> int:
        """Drop all entries, or only those of one rule set; returns the count removed."""
        with self._lock:
            lines = self._lines()
            keep = [] if ruleset_hash is None else [r for r in lines if r.get("ruleset") != ruleset_hash]
            if self.path.exists():
                self.path.write_text("".join(json.dumps(r) + "\n" for r in keep))
        return len(lines) - len(keep)
