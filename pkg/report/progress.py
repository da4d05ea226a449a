"""
Tagged progress lines on stderr, silenced by KAPPA0_QUIET=1 (set by --quiet).
"""

import os
import sys


def log(tag: str, message: str) -> None:
    if os.environ.get("KAPPA0_QUIET", "0") == "1":
        return
    print(f"[{tag}] {message}", file=sys.stderr, flush=True)


def reporter(tag: str):
    """Callback for the `progress=` parameter of the solvers."""
    return lambda message: log(tag, message)
