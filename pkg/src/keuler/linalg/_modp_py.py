"""Pure numpy elimination over a prime field, used when the extension is absent."""

import numpy as np


def echelon_mod_p(a, p, reduced=False):
    """Row-reduce the int64 array ``a`` in place modulo ``p``; return pivot columns.

    Same contract as the compiled kernel.  Each pivot step is one vectorized
    rank-one update restricted to rows that actually meet the pivot column and
    to the columns where the pivot row is nonzero.
    """
    nr, nc = a.shape
    row = 0
    pivots = []
    for col in range(nc):
        if row >= nr:
            break
        nz = np.flatnonzero(a[row:, col])
        if nz.size == 0:
            continue
        piv = row + int(nz[0])
        if piv != row:
            a[[row, piv], col:] = a[[piv, row], col:]
        inv = pow(int(a[row, col]), -1, p)
        prow_cols = col + np.flatnonzero(a[row, col:])
        a[row, prow_cols] = (a[row, prow_cols] * inv) % p
        if reduced:
            targets = np.flatnonzero(a[:, col])
            targets = targets[targets != row]
        else:
            targets = row + 1 + np.flatnonzero(a[row + 1:, col])
        if targets.size:
            f = (p - a[targets, col])[:, None]
            block = a[np.ix_(targets, prow_cols)]
            a[np.ix_(targets, prow_cols)] = (block + f * a[row, prow_cols][None, :]) % p
        pivots.append(col)
        row += 1
    return pivots
