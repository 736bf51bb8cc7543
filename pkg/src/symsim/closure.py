"""Brute-force Lie closure: ground truth for the symmetry test.

Skew-Hermitian matrices are handled as Gaussian-integer arrays (real and
imaginary parts) and compared through ``d**2`` real coordinates: the real
and imaginary parts of the strict upper triangle plus the imaginary part of
the diagonal.  Linear independence is decided exactly over the rationals by
an incrementally maintained reduced row echelon form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import BudgetExceeded, DimensionMismatch, NotClosed, NotSkewHermitian
from .gaussian import GaussianRational
from .instances import ProblemInstance
from .sparse import SparseMatrix

__all__ = [
    "LieBasis",
    "AlgebraDecomposition",
    "OracleVerdict",
    "lie_closure",
    "decompose",
    "oracle_verdict",
]

# int64 arithmetic is used only while every intermediate provably fits
_SAFE = 1 << 62


def _fits(*bounds: int) -> bool:
    return sum(bounds) < _SAFE


def _as_int64_or_object(a: np.ndarray) -> np.ndarray:
    if a.dtype == object:
        m = max((abs(int(x)) for x in a.flat), default=0)
        if m < (1 << 31):
            return a.astype(np.int64)
    return a


def _maxabs(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    return int(np.max(np.abs(a))) if a.dtype != object else max(abs(int(x)) for x in a.flat)


def _matmul(a: np.ndarray, b: np.ndarray, inner: int) -> np.ndarray:
    """Exact integer product, in int64 when safe and Python ints otherwise."""
    if a.dtype != object and b.dtype != object and _fits(inner * _maxabs(a) * _maxabs(b)):
        return np.matmul(a, b)
    return np.matmul(a.astype(object), b.astype(object))


class _SpanBuilder:
    """Exact rational RREF of a growing set of integer row vectors."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivots: list[int] = []
        self._rows: list[list[Fraction]] = []
        self._num = np.zeros((0, ncols), dtype=np.int64)
        self._den = 1

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def residuals(self, c: np.ndarray) -> np.ndarray:
        """``den * c - c[:, pivots] @ num``: zero exactly for rows in the span."""
        if not self.pivots:
            return c
        lead = c[:, self.pivots]
        prod = _matmul(lead, self._num, len(self.pivots))
        if c.dtype != object and prod.dtype != object and _fits(self._den * _maxabs(c), _maxabs(prod)):
            return self._den * c - prod
        return self._den * c.astype(object) - prod.astype(object)

    def add_residual(self, r: np.ndarray) -> None:
        """Insert a nonzero residual returned by :meth:`residuals`."""
        nz = np.flatnonzero(r)
        p = int(nz[0])
        v = int(r[p])
        new = [Fraction(int(x), v) for x in r]
        for row in self._rows:
            f = row[p]
            if f:
                for j in nz:
                    row[j] -= f * new[j]
        self._rows.append(new)
        self.pivots.append(p)
        den = 1
        for row in self._rows:
            for x in row:
                if x.denominator != 1:
                    den = math.lcm(den, x.denominator)
        num = np.array([[int(x * den) for x in row] for row in self._rows], dtype=object)
        self._den = den
        self._num = _as_int64_or_object(num)

    def add(self, c: np.ndarray) -> bool:
        return bool(self.extend(c.reshape(1, -1)))

    def extend(self, block: np.ndarray) -> list[int]:
        """Insert the rows of ``block`` in order; returns the indices that were new."""
        return self.extend_limited(block, None)

    def extend_limited(self, block: np.ndarray, budget: int | None) -> list[int]:
        res = self.residuals(block)
        live = [k for k in range(len(block)) if np.any(res[k])]
        pending = dict(zip(live, (res[k] for k in live)))
        added = []
        while live:
            k = live.pop(0)
            if budget is not None and len(added) >= budget:
                raise BudgetExceeded(f"span would exceed the dimension budget of {self.rank}")
            self.add_residual(pending.pop(k))
            added.append(k)
            if live:
                sub = self.residuals(block[live])
                keep = [(k2, r) for k2, r in zip(live, sub) if np.any(r)]
                live = [k2 for k2, _ in keep]
                pending = dict(keep)
        return added

    def nullspace(self) -> list[list[Fraction]]:
        """Basis of ``{x : row . x = 0 for all rows}``, one vector per free column."""
        piv = set(self.pivots)
        out = []
        for f in range(self.ncols):
            if f in piv:
                continue
            x = [Fraction(0)] * self.ncols
            x[f] = Fraction(1)
            for p, row in zip(self.pivots, self._rows):
                x[p] = -row[f]
            out.append(x)
        return out


# ---------------------------------------------------------------------------
# matrix <-> integer arrays


def _to_arrays(m: SparseMatrix) -> tuple[np.ndarray, np.ndarray]:
    lcm = 1
    for v in m._e.values():
        lcm = math.lcm(lcm, v.re.denominator, v.im.denominator)
    d = m.nrows
    re = np.zeros((d, d), dtype=object)
    im = np.zeros((d, d), dtype=object)
    for (i, j), v in m.items():
        re[i, j] = int(v.re * lcm)
        im[i, j] = int(v.im * lcm)
    return _primitive(_as_int64_or_object(re), _as_int64_or_object(im))


def _primitive(re: np.ndarray, im: np.ndarray):
    g = 0
    for x in re.flat:
        g = math.gcd(g, int(x))
    for x in im.flat:
        g = math.gcd(g, int(x))
    if g > 1:
        re = re // g
        im = im // g
    return _as_int64_or_object(re), _as_int64_or_object(im)


def _to_sparse(re: np.ndarray, im: np.ndarray) -> SparseMatrix:
    d = re.shape[0]
    e = {}
    for i, j in zip(*np.nonzero((re != 0) | (im != 0))):
        e[(int(i), int(j))] = GaussianRational(int(re[i, j]), int(im[i, j]))
    return SparseMatrix._trusted(d, d, e)


class _Coords:
    def __init__(self, d: int):
        self.d = d
        self.iu = np.triu_indices(d, 1)
        self.diag = np.arange(d)

    def __call__(self, re: np.ndarray, im: np.ndarray) -> np.ndarray:
        """Real coordinates of stacked skew-Hermitian matrices ``(k, d, d)``."""
        i, j = self.iu
        return np.concatenate(
            [re[:, i, j], im[:, i, j], im[:, self.diag, self.diag]], axis=1
        )


def _commutators(xr, xi, br, bi):
    """``[x, b]`` for one ``x`` against a stack ``b`` (exact)."""
    d = xr.shape[0]
    bound = 2 * d * max(_maxabs(xr), _maxabs(xi)) * max(_maxabs(br), _maxabs(bi))
    if not _fits(2 * bound) or xr.dtype == object or br.dtype == object:
        xr, xi, br, bi = (a.astype(object) for a in (xr, xi, br, bi))
    re = (xr @ br - xi @ bi) - (br @ xr - bi @ xi)
    im = (xr @ bi + xi @ br) - (br @ xi + bi @ xr)
    return re, im


# ---------------------------------------------------------------------------
# closure


@dataclass(frozen=True)
class LieBasis:
    """Real basis of a matrix Lie algebra ``<G>``."""

    dim: int
    basis: tuple
    generation_depth: int

    def __post_init__(self):
        object.__setattr__(self, "basis", tuple(self.basis))
        if self.dim != len(self.basis):
            raise ValueError("dim must equal the number of basis elements")


def _check_generators(gens: Sequence[SparseMatrix]) -> int:
    if not gens:
        raise ValueError("at least one generator is required")
    d = gens[0].nrows
    for g in gens:
        if g.shape != (d, d):
            raise DimensionMismatch(f"generator of shape {g.shape}, expected {d}x{d}")
        if not g.is_skew_hermitian():
            raise NotSkewHermitian("Lie closure generators must be skew-Hermitian")
    return d


class _Closure:
    def __init__(self, d: int, max_dim: int):
        self.d = d
        self.max_dim = max_dim
        self.coords = _Coords(d)
        self.span = _SpanBuilder(d * d)
        self.re: list[np.ndarray] = []
        self.im: list[np.ndarray] = []
        self.depth: list[int] = []

    def offer(self, re_stack, im_stack, depths) -> None:
        block = self.coords(re_stack, im_stack)
        budget = self.max_dim - len(self.re)
        for k in self.span.extend_limited(block, budget):
            re, im = _primitive(re_stack[k], im_stack[k])
            self.re.append(re)
            self.im.append(im)
            self.depth.append(depths[k])

    def _stack(self, upto: int):
        def stack(xs):
            if any(x.dtype == object for x in xs[:upto]):
                return np.array([x.astype(object) for x in xs[:upto]], dtype=object)
            return np.stack(xs[:upto])
        return stack(self.re), stack(self.im)

    def run(self, start: int = 1) -> None:
        i = start
        while i < len(self.re):
            br, bi = self._stack(i)
            re, im = _commutators(self.re[i], self.im[i], br, bi)
            depth = [max(self.depth[i], self.depth[j]) + 1 for j in range(i)]
            self.offer(re, im, depth)
            i += 1

    def result(self) -> LieBasis:
        basis = tuple(_to_sparse(r, m) for r, m in zip(self.re, self.im))
        return LieBasis(len(basis), basis, max(self.depth, default=0))


def _seed(gens: Sequence[SparseMatrix], max_dim: int | None) -> _Closure:
    d = _check_generators(gens)
    cl = _Closure(d, d * d if max_dim is None else max_dim)
    for g in gens:
        re, im = _to_arrays(g)
        cl.offer(re[None], im[None], [0])
    return cl


def lie_closure(generators: Sequence[SparseMatrix], max_dim: int | None = None) -> LieBasis:
    """Real Lie algebra generated by skew-Hermitian ``generators``.

    Elements are processed first-in first-out: each basis element is
    commuted with every earlier one and independent results are appended.
    Raises :class:`BudgetExceeded` rather than truncating when the dimension
    would exceed ``max_dim`` (default ``d**2``).

    >>> from symsim.pauli import parse_pauli, skewify
    >>> lie_closure([skewify(parse_pauli(s, 1)) for s in ("X1", "Y1")]).dim
    3
    """
    cl = _seed(list(generators), max_dim)
    cl.run()
    return cl.result()


def _extend_closure(basis: LieBasis, extra: Sequence[SparseMatrix], max_dim: int | None) -> LieBasis:
    """Closure of an already-closed basis plus ``extra`` generators."""
    cl = _seed(list(basis.basis), max_dim)
    closed = len(cl.re)
    cl.depth = [0] * closed
    _check_generators(list(basis.basis[:1]) + list(extra))
    for g in extra:
        re, im = _to_arrays(g)
        cl.offer(re[None], im[None], [0])
    cl.run(start=max(closed, 1))
    return cl.result()


# ---------------------------------------------------------------------------
# decomposition


@dataclass(frozen=True)
class AlgebraDecomposition:
    """``g = [g, g] + center``, as exact real bases."""

    semisimple_dim: int
    center_dim: int
    center_basis: tuple
    derived_basis: tuple

    def __post_init__(self):
        object.__setattr__(self, "center_basis", tuple(self.center_basis))
        object.__setattr__(self, "derived_basis", tuple(self.derived_basis))


def decompose(basis: LieBasis) -> AlgebraDecomposition:
    """Split a closed Lie algebra into its derived algebra and center.

    Raises :class:`NotClosed` if some commutator of basis elements leaves
    the span of the basis.
    """
    mats = list(basis.basis)
    m = len(mats)
    if m == 0:
        return AlgebraDecomposition(0, 0, (), ())
    d = _check_generators(mats)
    coords = _Coords(d)
    arrays = [_to_arrays(b) for b in mats]
    obj = any(r.dtype == object or i.dtype == object for r, i in arrays)
    dt = object if obj else np.int64
    re = np.array([r for r, _ in arrays], dtype=dt)
    im = np.array([i for _, i in arrays], dtype=dt)
    span = _SpanBuilder(d * d)
    for c in coords(re, im):
        if not span.add(c):
            raise ValueError("basis elements are linearly dependent")

    derived = _SpanBuilder(d * d)
    derived_mats = []
    # ad[k] collects the coordinates of [b_k, b_j] for all j (center equations)
    ad_rows = _SpanBuilder(m)
    for i in range(m):
        cr, ci = _commutators(re[i], im[i], re, im)
        c = coords(cr, ci)
        if np.any(span.residuals(c)):
            raise NotClosed(f"a commutator with basis element {i} leaves the span")
        for k in derived.extend(c[:i]):
            derived_mats.append(_to_sparse(*_primitive(cr[k], ci[k])))
        # x = sum_k x_k b_k commutes with b_i iff sum_k x_k [b_k, b_i] = 0
        rows = -c.T  # column k holds coords of [b_k, b_i] = -[b_i, b_k]
        ad_rows.extend(rows)

    center_mats = []
    for x in ad_rows.nullspace():
        lcm = 1
        for v in x:
            lcm = math.lcm(lcm, v.denominator)
        w = [int(v * lcm) for v in x]
        acc_r = sum(wk * re[k].astype(object) for k, wk in enumerate(w) if wk)
        acc_i = sum(wk * im[k].astype(object) for k, wk in enumerate(w) if wk)
        center_mats.append(_to_sparse(*_primitive(np.asarray(acc_r), np.asarray(acc_i))))
    return AlgebraDecomposition(derived.rank, len(center_mats), center_mats, derived_mats)


# ---------------------------------------------------------------------------
# verdict


@dataclass(frozen=True)
class OracleVerdict:
    verdict: str
    dim_p: int
    dim_pq: int

    @property
    def simulable(self) -> bool:
        return self.verdict == "simulable"


def oracle_verdict(instance: ProblemInstance, max_dim: int | None = None) -> OracleVerdict:
    """Simulable iff ``dim <P> = dim <P u Q>`` (``<P>`` is always contained in ``<P u Q>``)."""
    lp = lie_closure(instance.p_set, max_dim)
    lpq = _extend_closure(lp, instance.q_set, max_dim) if instance.q_set else lp
    verdict = "simulable" if lp.dim == lpq.dim else "not_simulable"
    return OracleVerdict(verdict, lp.dim, lpq.dim)
