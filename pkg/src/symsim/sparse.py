"""Sparse exact complex matrices and the Kronecker/vec toolkit."""

from __future__ import annotations

from collections import defaultdict
from typing import Iterable, Mapping

from .errors import DimensionMismatch
from .gaussian import ONE, ZERO, GaussianRational

__all__ = [
    "SparseMatrix",
    "kron",
    "vec",
    "unvec",
    "commutator",
    "hs_inner",
    "swap_matrix",
]


class SparseMatrix:
    """Immutable ``nrows x ncols`` matrix over the Gaussian rationals.

    Only nonzero entries are stored, keyed by ``(row, col)``.  Zero values
    passed to the constructor are dropped and every index is bounds-checked.
    """

    __slots__ = ("nrows", "ncols", "_e", "_rows", "_hash")

    def __init__(self, nrows: int, ncols: int, entries: Mapping | Iterable = ()):
        if nrows < 0 or ncols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        self.nrows = int(nrows)
        self.ncols = int(ncols)
        items = entries.items() if isinstance(entries, Mapping) else entries
        e = {}
        coerce = GaussianRational.coerce
        for (i, j), v in items:
            if not (0 <= i < nrows and 0 <= j < ncols):
                raise IndexError(f"entry ({i}, {j}) outside {nrows}x{ncols}")
            v = coerce(v)
            if v:
                e[(i, j)] = v
        self._e = e
        self._rows = None
        self._hash = None

    @classmethod
    def _trusted(cls, nrows, ncols, e):
        # internal constructor: ``e`` already holds nonzero GaussianRationals
        m = object.__new__(cls)
        m.nrows, m.ncols, m._e, m._rows, m._hash = nrows, ncols, e, None, None
        return m

    # construction ---------------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "SparseMatrix":
        return cls._trusted(n, n, {(i, i): ONE for i in range(n)})

    @classmethod
    def zeros(cls, nrows: int, ncols: int | None = None) -> "SparseMatrix":
        return cls._trusted(nrows, nrows if ncols is None else ncols, {})

    @classmethod
    def from_dense(cls, rows) -> "SparseMatrix":
        rows = [list(r) for r in rows]
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise DimensionMismatch("ragged dense matrix")
        return cls(nrows, ncols, {(i, j): v for i, r in enumerate(rows) for j, v in enumerate(r)})

    @classmethod
    def column(cls, values) -> "SparseMatrix":
        values = list(values)
        return cls(len(values), 1, {(i, 0): v for i, v in enumerate(values)})

    @classmethod
    def diag(cls, values) -> "SparseMatrix":
        values = list(values)
        return cls(len(values), len(values), {(i, i): v for i, v in enumerate(values)})

    # access ---------------------------------------------------------------

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    @property
    def entries(self) -> Mapping:
        return dict(self._e)

    @property
    def nnz(self) -> int:
        return len(self._e)

    def items(self):
        return self._e.items()

    def __getitem__(self, key) -> GaussianRational:
        i, j = key
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise IndexError(key)
        return self._e.get((i, j), ZERO)

    def rows(self) -> dict:
        """Row-major view ``{row: {col: value}}`` (cached)."""
        if self._rows is None:
            r = defaultdict(dict)
            for (i, j), v in self._e.items():
                r[i][j] = v
            self._rows = dict(r)
        return self._rows

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def is_zero(self) -> bool:
        return not self._e

    def to_dense(self) -> list:
        out = [[ZERO] * self.ncols for _ in range(self.nrows)]
        for (i, j), v in self._e.items():
            out[i][j] = v
        return out

    def to_complex(self):
        """Dense ``numpy`` complex array (for plotting/debugging only)."""
        import numpy as np

        a = np.zeros(self.shape, dtype=complex)
        for (i, j), v in self._e.items():
            a[i, j] = complex(v)
        return a

    # algebra --------------------------------------------------------------

    def _check_same_shape(self, other):
        if self.shape != other.shape:
            raise DimensionMismatch(f"shapes {self.shape} and {other.shape} differ")

    def __add__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        self._check_same_shape(other)
        e = dict(self._e)
        for k, v in other._e.items():
            s = e.get(k)
            if s is None:
                e[k] = v
            else:
                s = s + v
                if s:
                    e[k] = s
                else:
                    del e[k]
        return SparseMatrix._trusted(self.nrows, self.ncols, e)

    def __neg__(self):
        return SparseMatrix._trusted(self.nrows, self.ncols, {k: -v for k, v in self._e.items()})

    def __sub__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> "SparseMatrix":
        c = GaussianRational.coerce(c)
        if not c:
            return SparseMatrix.zeros(self.nrows, self.ncols)
        return SparseMatrix._trusted(self.nrows, self.ncols, {k: v * c for k, v in self._e.items()})

    def __mul__(self, c):
        if isinstance(c, SparseMatrix):
            return NotImplemented
        try:
            return self.scale(c)
        except TypeError:
            return NotImplemented

    __rmul__ = __mul__

    def __matmul__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        if self.ncols != other.nrows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        brows = other.rows()
        acc = {}
        for (i, k), a in self._e.items():
            brow = brows.get(k)
            if not brow:
                continue
            for j, b in brow.items():
                key = (i, j)
                p = a * b
                s = acc.get(key)
                acc[key] = p if s is None else s + p
        return SparseMatrix._trusted(self.nrows, other.ncols, {k: v for k, v in acc.items() if v})

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix._trusted(self.ncols, self.nrows, {(j, i): v for (i, j), v in self._e.items()})

    @property
    def T(self):
        return self.transpose()

    def conjugate(self) -> "SparseMatrix":
        return SparseMatrix._trusted(self.nrows, self.ncols, {k: v.conjugate() for k, v in self._e.items()})

    def adjoint(self) -> "SparseMatrix":
        return SparseMatrix._trusted(
            self.ncols, self.nrows, {(j, i): v.conjugate() for (i, j), v in self._e.items()}
        )

    @property
    def H(self):
        return self.adjoint()

    def trace(self) -> GaussianRational:
        if not self.is_square():
            raise DimensionMismatch("trace of a non-square matrix")
        t = ZERO
        for (i, j), v in self._e.items():
            if i == j:
                t = t + v
        return t

    def is_hermitian(self) -> bool:
        return self.is_square() and self == self.adjoint()

    def is_skew_hermitian(self) -> bool:
        return self.is_square() and self == -self.adjoint()

    # equality -------------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self._e == other._e

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nrows, self.ncols, frozenset(self._e.items())))
        return self._hash

    def __repr__(self):
        if self.nrows * self.ncols <= 16:
            body = "; ".join(" ".join(str(v) for v in row) for row in self.to_dense())
            return f"SparseMatrix({self.nrows}x{self.ncols}: [{body}])"
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={self.nnz})"


def kron(a: SparseMatrix, b: SparseMatrix) -> SparseMatrix:
    """Kronecker product; entry ``(i*b.nrows+k, j*b.ncols+l) = a[i,j]*b[k,l]``."""
    br, bc = b.nrows, b.ncols
    bitems = list(b.items())
    e = {}
    for (i, j), x in a.items():
        r0, c0 = i * br, j * bc
        for (k, l), y in bitems:
            e[(r0 + k, c0 + l)] = x * y
    return SparseMatrix._trusted(a.nrows * br, a.ncols * bc, e)


def vec(s: SparseMatrix) -> SparseMatrix:
    """Column-major stacking: entry ``j*nrows + i`` holds ``s[i, j]``."""
    n = s.nrows
    return SparseMatrix._trusted(n * s.ncols, 1, {(j * n + i, 0): v for (i, j), v in s.items()})


def unvec(v: SparseMatrix, nrows: int, ncols: int | None = None) -> SparseMatrix:
    """Inverse of :func:`vec`."""
    ncols = nrows if ncols is None else ncols
    if v.shape != (nrows * ncols, 1):
        raise DimensionMismatch(f"vector of shape {v.shape} is not vec of {nrows}x{ncols}")
    return SparseMatrix._trusted(nrows, ncols, {(k % nrows, k // nrows): x for (k, _), x in v.items()})


def commutator(a: SparseMatrix, b: SparseMatrix) -> SparseMatrix:
    if not (a.is_square() and b.is_square()) or a.shape != b.shape:
        raise DimensionMismatch(f"commutator needs equal square shapes, got {a.shape} and {b.shape}")
    return a @ b - b @ a


def hs_inner(a: SparseMatrix, b: SparseMatrix) -> GaussianRational:
    """Hilbert-Schmidt product ``Tr(a^dagger b)``."""
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes {a.shape} and {b.shape} differ")
    t = ZERO
    be = b._e
    for k, x in a.items():
        y = be.get(k)
        if y is not None:
            t = t + x.conjugate() * y
    return t


def swap_matrix(d: int) -> SparseMatrix:
    """The commutation matrix ``K_{d,d}`` with ``K (A (x) B) = (B (x) A) K``."""
    return SparseMatrix._trusted(d * d, d * d, {(j * d + i, i * d + j): ONE for i in range(d) for j in range(d)})

