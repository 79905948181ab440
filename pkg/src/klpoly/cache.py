"""Disk cache for computed polynomial tables.

Entries are JSON files keyed by a fingerprint of the Cartan matrix, the
table kind and route, and the package version.  Anything that fails to
load, parse or match its key is discarded and recomputed; a cache can slow
a run down but can never change its output, and verification never reads
from it.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from . import __version__
from .coxeter import CartanDatum

__all__ = ["TableCache", "datum_fingerprint"]


def datum_fingerprint(datum: CartanDatum, kind: str, route: str) -> str:
    payload = json.dumps(
        {
            "cartan": [list(row) for row in datum.cartan],
            "kind": kind,
            "route": route,
            "version": __version__,
        },
        sort_keys=True,
        separators=(",", ":"),
    )
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


class TableCache:
    def __init__(self, directory: str | Path):
        self.directory = Path(directory)

    def _path(self, fingerprint: str) -> Path:
        return self.directory / f"table-{fingerprint}.json"

    def load(self, datum: CartanDatum, kind: str, route: str) -> list[dict] | None:
        """Return cached rows, or None when absent or unusable."""
        fp = datum_fingerprint(datum, kind, route)
        path = self._path(fp)
        try:
            payload = json.loads(path.read_text())
            if payload.get("fingerprint") != fp:
                return None
            if payload.get("cartan") != [list(row) for row in datum.cartan]:
                return None
            rows = payload["rows"]
            for row in rows:
                if not isinstance(row["w"], str) or not isinstance(row["poly"], list):
                    return None
            return rows
        except (OSError, ValueError, KeyError, TypeError):
            return None

    def store(self, datum: CartanDatum, kind: str, route: str, rows: list[dict]) -> Path:
        fp = datum_fingerprint(datum, kind, route)
        self.directory.mkdir(parents=True, exist_ok=True)
        path = self._path(fp)
        payload = {
            "fingerprint": fp,
            "cartan": [list(row) for row in datum.cartan],
            "kind": kind,
            "route": route,
            "version": __version__,
            "rows": rows,
        }
        path.write_text(json.dumps(payload, sort_keys=True, indent=1) + "\n")
        return path
