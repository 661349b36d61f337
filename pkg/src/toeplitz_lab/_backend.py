"""Kernel backend selection.

The compiled ``_kernels`` extension is used when it imports; otherwise the
pure-Python ``_kernels_py`` mirror.  ``TOEPLITZ_LAB_BACKEND=python`` forces
the fallback, ``=cython`` makes a missing extension an error.
"""

from __future__ import annotations

import importlib
import os

_CHOICES = {"cython": "toeplitz_lab._kernels", "python": "toeplitz_lab._kernels_py"}


def load(name: str | None = None):
    """Return the kernel module for ``name`` (``"cython"``, ``"python"`` or ``None`` for auto)."""
    if name is not None:
        if name not in _CHOICES:
            raise ValueError(f"unknown backend {name!r}; choose from {sorted(_CHOICES)}")
        return importlib.import_module(_CHOICES[name])
    try:
        return importlib.import_module(_CHOICES["cython"])
    except ImportError:
        return importlib.import_module(_CHOICES["python"])


def available() -> list[str]:
    out = []
    for name, mod in _CHOICES.items():
        try:
            importlib.import_module(mod)
        except ImportError:
            continue
        out.append(name)
    return out


kernels = load(os.environ.get("TOEPLITZ_LAB_BACKEND") or None)
BACKEND = kernels.NAME
