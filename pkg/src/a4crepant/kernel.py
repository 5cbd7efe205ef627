"""Selects the GF(2) reduction kernel at import time.

The compiled extension is used when it was built and the packed layout fits
in 64 bits; otherwise the pure-Python kernel runs. Set
``A4CREPANT_PURE_PYTHON=1`` to force the fallback.
"""
from __future__ import annotations

import os

from . import _kernel_py

try:
    if os.environ.get("A4CREPANT_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("pure Python kernel forced by environment")
    from . import _kernel as _compiled
except ImportError:
    _compiled = None

COMPILED = _compiled is not None
_forced: str | None = None


def available() -> list[str]:
    return ["python"] + (["compiled"] if COMPILED else [])


def use(name: str | None) -> None:
    """Force a backend (``"python"``, ``"compiled"``) or restore auto (``None``)."""
    global _forced
    if name not in (None, "python", "compiled"):
        raise ValueError(f"unknown kernel {name!r}")
    if name == "compiled" and not COMPILED:
        raise RuntimeError("compiled kernel is not built")
    _forced = name


def get(total_bits: int):
    """The kernel module to use for a layout of ``total_bits`` bits."""
    if _forced == "python" or not COMPILED or total_bits > 64:
        return _kernel_py
    return _compiled


def active_name(total_bits: int = 64) -> str:
    return get(total_bits).NAME
