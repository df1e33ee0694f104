"""Worker-count policy for lattice sweeps.

TOMOKIT_THREADS caps parallelism; it never raises it. Results are assembled
in chunk order, so the worker count cannot change any output bit.
"""

import os

_ENV_VAR = "TOMOKIT_THREADS"


def max_workers(requested: int | None = None) -> int:
    """Resolve the effective worker count for a parallel sweep.

    ``requested`` is what the caller would like (None means "pick a small
    default"). The environment variable caps the result; an unset or
    unparsable variable imposes no cap.
    """
    base = requested if requested is not None else min(4, os.cpu_count() or 1)
    raw = os.environ.get(_ENV_VAR)
    if raw is not None:
        try:
            cap = int(raw)
        except ValueError:
            cap = 0
        if cap >= 1:
            base = min(base, cap)
    return max(1, base)
