# src/bounded_approx/runtime.py
from __future__ import annotations

import os
import platform
from importlib import metadata
from typing import Any

THREADS_ENV = "APPROX_THREADS"


def get_package_version(dist_name: str = "bounded-approx") -> str:
    try:
        return metadata.version(dist_name)
    except Exception:
        return "unknown"


def resolve_threads(requested: int = 1) -> int:
    """Worker count for step-parallel work, capped by APPROX_THREADS when set."""
    requested = max(1, int(requested))
    v = os.environ.get(THREADS_ENV)
    if v and v.strip():
        try:
            cap = int(v.strip())
        except ValueError:
            return requested
        if cap >= 1:
            return min(requested, cap)
    return requested


def collect_code_metadata() -> dict[str, Any]:
    # Only version strings: reports must stay byte-identical across reruns.
    return {
        "package_version": get_package_version(),
        "numpy": get_package_version("numpy"),
        "scipy": get_package_version("scipy"),
        "cvxpy": get_package_version("cvxpy"),
        "python": platform.python_version(),
    }
