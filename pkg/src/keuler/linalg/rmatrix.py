"""Sparse exact matrices over the rationals.

Entries are :class:`fractions.Fraction` (always reduced, positive
denominator).  Storage is a dict of rows, each a dict ``col -> value`` with
zeros never stored.  Instances are treated as immutable.
"""

from fractions import Fraction
from math import lcm

from keuler.guard import check_dim

Rational = Fraction


def as_rational(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool) or isinstance(x, float):
        raise TypeError(f"refusing inexact or boolean scalar {x!r}")
    return Fraction(x)


class RMatrix:
    __slots__ = ("nrows", "ncols", "_rows")

    def __init__(self, nrows, ncols, entries=None):
        check_dim(nrows, "matrix row space")
        check_dim(ncols, "matrix column space")
        self.nrows = nrows
        self.ncols = ncols
        rows = {}
        if entries:
            items = entries.items() if isinstance(entries, dict) else entries
            for (i, j), v in items:
                if not (0 <= i < nrows and 0 <= j < ncols):
                    raise IndexError(f"entry ({i}, {j}) outside {nrows}x{ncols}")
                v = as_rational(v)
                if v:
                    row = rows.setdefault(i, {})
                    if j in row:
                        v = row[j] + v
                        if v:
                            row[j] = v
                        else:
                            del row[j]
                            if not row:
                                del rows[i]
                    else:
                        row[j] = v
        self._rows = rows

    @classmethod
    def _raw(cls, nrows, ncols, rows):
        # trusted constructor: rows already hold nonzero Fractions
        obj = cls.__new__(cls)
        obj.nrows = nrows
        obj.ncols = ncols
        obj._rows = rows
        return obj

    @classmethod
    def from_accumulated(cls, nrows, ncols, entries):
        """Build from a dict ``(i, j) -> int or Fraction`` with unique keys (zeros dropped)."""
        check_dim(nrows, "matrix row space")
        check_dim(ncols, "matrix column space")
        rows = {}
        for (i, j), v in entries.items():
            if v:
                rows.setdefault(i, {})[j] = v if isinstance(v, Fraction) else Fraction(v)
        return cls._raw(nrows, ncols, rows)

    @classmethod
    def zeros(cls, nrows, ncols):
        return cls(nrows, ncols)

    @classmethod
    def identity(cls, n):
        return cls._raw(n, n, {i: {i: Fraction(1)} for i in range(n)})

    @classmethod
    def from_rows(cls, rows, ncols=None):
        rows = [list(r) for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged rows")
        return cls(len(rows), ncols, {(i, j): v for i, r in enumerate(rows) for j, v in enumerate(r)})

    @classmethod
    def from_columns(cls, columns, nrows):
        return cls(nrows, len(columns), {(i, j): v for j, c in enumerate(columns) for i, v in enumerate(c)})

    @classmethod
    def diagonal_blocks(cls, blocks):
        """Block-diagonal matrix with the given blocks in order."""
        nr = sum(b.nrows for b in blocks)
        nc = sum(b.ncols for b in blocks)
        rows = {}
        ro = co = 0
        for b in blocks:
            for i, row in b._rows.items():
                rows[ro + i] = {co + j: v for j, v in row.items()}
            ro += b.nrows
            co += b.ncols
        return cls._raw(nr, nc, rows)

    @classmethod
    def assemble(cls, row_offsets, col_offsets, nrows, ncols, blocks):
        """Place ``blocks[(r, c)]`` at ``(row_offsets[r], col_offsets[c])``."""
        rows = {}
        for (r, c), b in blocks.items():
            ro, co = row_offsets[r], col_offsets[c]
            for i, row in b._rows.items():
                tgt = rows.setdefault(ro + i, {})
                for j, v in row.items():
                    jj = co + j
                    if jj in tgt:
                        w = tgt[jj] + v
                        if w:
                            tgt[jj] = w
                        else:
                            del tgt[jj]
                    else:
                        tgt[jj] = v
        rows = {i: r for i, r in rows.items() if r}
        return cls._raw(nrows, ncols, rows)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self._rows.get(i, {}).get(j, Fraction(0))

    def items(self):
        for i, row in self._rows.items():
            for j, v in row.items():
                yield (i, j), v

    @property
    def nnz(self):
        return sum(len(r) for r in self._rows.values())

    def is_zero(self):
        return not self._rows

    def row(self, i):
        r = self._rows.get(i, {})
        return [r.get(j, Fraction(0)) for j in range(self.ncols)]

    def column(self, j):
        return [self._rows.get(i, {}).get(j, Fraction(0)) for i in range(self.nrows)]

    def to_rows(self):
        return [self.row(i) for i in range(self.nrows)]

    def columns(self):
        cols = [[Fraction(0)] * self.nrows for _ in range(self.ncols)]
        for (i, j), v in self.items():
            cols[j][i] = v
        return cols

    @property
    def T(self):
        rows = {}
        for i, row in self._rows.items():
            for j, v in row.items():
                rows.setdefault(j, {})[i] = v
        return RMatrix._raw(self.ncols, self.nrows, rows)

    def __matmul__(self, other):
        if not isinstance(other, RMatrix):
            return NotImplemented
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        orows = other._rows
        rows = {}
        for i, row in self._rows.items():
            acc = {}
            for k, v in row.items():
                ok = orows.get(k)
                if ok is None:
                    continue
                for j, w in ok.items():
                    acc[j] = acc.get(j, 0) + v * w
            acc = {j: x for j, x in acc.items() if x}
            if acc:
                rows[i] = acc
        return RMatrix._raw(self.nrows, other.ncols, rows)

    def apply(self, vec):
        """Matrix times a column vector given as a sequence."""
        if len(vec) != self.ncols:
            raise ValueError("vector length mismatch")
        out = [Fraction(0)] * self.nrows
        for i, row in self._rows.items():
            s = 0
            for j, v in row.items():
                x = vec[j]
                if x:
                    s += v * x
            out[i] = Fraction(s)
        return out

    def _combine(self, other, sign):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        rows = {i: dict(r) for i, r in self._rows.items()}
        for i, row in other._rows.items():
            tgt = rows.setdefault(i, {})
            for j, v in row.items():
                w = tgt.get(j, 0) + sign * v
                if w:
                    tgt[j] = w
                else:
                    tgt.pop(j, None)
        rows = {i: r for i, r in rows.items() if r}
        return RMatrix._raw(self.nrows, self.ncols, rows)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        c = as_rational(c)
        if not c:
            return RMatrix(self.nrows, self.ncols)
        return RMatrix._raw(
            self.nrows, self.ncols, {i: {j: v * c for j, v in r.items()} for i, r in self._rows.items()}
        )

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, RMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self):
        return hash((self.nrows, self.ncols, frozenset((k, v) for k, v in self.items())))

    def __repr__(self):
        if self.nrows * self.ncols <= 64:
            body = [[str(x) for x in r] for r in self.to_rows()]
            return f"RMatrix({self.nrows}x{self.ncols}, {body})"
        return f"RMatrix({self.nrows}x{self.ncols}, nnz={self.nnz})"

    def integer_entries(self):
        """Entries scaled by the lcm of all denominators (rank-preserving).

        Returns ``(scale, rows)`` with ``rows`` a dict of dicts of ints.
        """
        den = 1
        for _, v in self.items():
            if v.denominator != 1:
                den = lcm(den, v.denominator)
        rows = {
            i: {j: v.numerator * (den // v.denominator) for j, v in r.items()}
            for i, r in self._rows.items()
        }
        return den, rows

    def submatrix(self, row_idx, col_idx):
        rpos = {r: a for a, r in enumerate(row_idx)}
        cpos = {c: b for b, c in enumerate(col_idx)}
        rows = {}
        for i, row in self._rows.items():
            a = rpos.get(i)
            if a is None:
                continue
            sub = {cpos[j]: v for j, v in row.items() if j in cpos}
            if sub:
                rows[a] = sub
        return RMatrix._raw(len(row_idx), len(col_idx), rows)


def hstack(mats, nrows=None):
    if not mats:
        return RMatrix(nrows or 0, 0)
    nrows = mats[0].nrows
    offs = [0]
    for m in mats:
        if m.nrows != nrows:
            raise ValueError("hstack row mismatch")
        offs.append(offs[-1] + m.ncols)
    return RMatrix.assemble([0], offs, nrows, offs[-1], {(0, c): m for c, m in enumerate(mats)})


def vstack(mats, ncols=None):
    if not mats:
        return RMatrix(0, ncols or 0)
    ncols = mats[0].ncols
    offs = [0]
    for m in mats:
        if m.ncols != ncols:
            raise ValueError("vstack column mismatch")
        offs.append(offs[-1] + m.nrows)
    return RMatrix.assemble(offs, [0], offs[-1], ncols, {(r, 0): m for r, m in enumerate(mats)})
