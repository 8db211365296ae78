"""Size guard against combinatorial blow-up of symmetric powers."""

import os
from contextlib import contextmanager

DEFAULT_MAX_CELL_DIM = 200_000
ENV_VAR = "WITTEN_MAX_CELL_DIM"

_override = None


class SizeGuardError(RuntimeError):
    """Raised before building a vector space or matrix larger than the guard."""


def max_cell_dim():
    if _override is not None:
        return _override
    env = os.environ.get(ENV_VAR)
    if env:
        return int(env)
    return DEFAULT_MAX_CELL_DIM


@contextmanager
def cell_dim_limit(limit):
    """Temporarily replace the guard (``None`` restores env/default lookup)."""
    global _override
    old = _override
    _override = limit
    try:
        yield
    finally:
        _override = old


def check_dim(dim, what="space"):
    limit = max_cell_dim()
    if dim > limit:
        raise SizeGuardError(
            f"{what} has dimension {dim}, above the limit {limit} "
            f"(raise it with --max-cell-dim or {ENV_VAR})"
        )
    return dim
