"""Backend selection for the subexpression mask walk.

Walking all 2^r masks of a reduced word is the one genuinely hot loop in
this package; everything else is exact bignum polynomial arithmetic that a
compiled kernel would not help.  A Cython extension is built at install
time when possible, and a pure-Python implementation with the identical
contract is used otherwise.  Set KLPOLY_BACKEND=python or =cython to force
a choice; the default picks the compiled kernel when present.
"""

from __future__ import annotations

import os

from . import _cellwalk_py

try:
    from . import _cellwalk as _compiled  # type: ignore[attr-defined]
except ImportError:
    _compiled = None

MAX_WORD_LENGTH = _cellwalk_py.MAX_WORD_LENGTH

_requested = os.environ.get("KLPOLY_BACKEND", "auto")
if _requested not in ("auto", "python", "cython"):
    raise ImportError(
        f"KLPOLY_BACKEND must be auto, python or cython, got {_requested!r}"
    )
if _requested == "cython" and _compiled is None:
    raise ImportError("KLPOLY_BACKEND=cython but the compiled kernel is not built")

if _requested == "python" or _compiled is None:
    BACKEND = "python"
    walk_masks = _cellwalk_py.walk_masks
else:
    BACKEND = "cython"
    walk_masks = _compiled.walk_masks


def has_compiled() -> bool:
    return _compiled is not None


def available_backends() -> tuple[str, ...]:
    return ("python", "cython") if _compiled is not None else ("python",)


def get_walker(name: str):
    """Explicit backend lookup, used by benchmarks and parity tests."""
    if name == "python":
        return _cellwalk_py.walk_masks
    if name == "cython":
        if _compiled is None:
            raise ValueError("compiled kernel is not available")
        return _compiled.walk_masks
    raise ValueError(f"unknown backend {name!r}")
