"""Exact and modular sparse elimination over Q(i).

Rows of a homogeneous system are held internally as ``{col: (a, b)}`` maps of
Gaussian integers ``a + b*i``; scaling a row never changes its row space, so
every caller clears denominators once at the boundary.  Two back ends share
the same pipeline:

* exact: fraction-free elimination in Z[i] with content removal;
* modular: elimination in GF(p) for a prime ``p = 1 (mod 4)``, where ``i`` is
  mapped to a square root of ``-1``.  The image of a Z[i] matrix under this
  ring map can only lose rank, so a modular rank is a lower bound.

Before elimination the system is peeled (rows with a single live column pin
that column) and split into connected components, which keeps the
Sylvester-type systems of the symmetry engine small.
"""

from __future__ import annotations

import heapq
import math
import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DimensionMismatch
from .gaussian import GaussianRational
from .sparse import SparseMatrix

__all__ = [
    "RankResult",
    "LinearSystem",
    "rank",
    "nullspace_basis",
    "real_span_rank",
    "canonical_basis",
    "span_contains",
    "random_prime",
    "DEFAULT_MODULAR_THRESHOLD",
]

#: ``mode="auto"`` switches to modular arithmetic above this many matrix cells.
DEFAULT_MODULAR_THRESHOLD = 1 << 27

_DEFAULT_SEED = 20151013
MODES = ("exact", "modular", "auto")


@dataclass(frozen=True)
class RankResult:
    rank: int
    method: str
    prime: int | None = None

    def __post_init__(self):
        if self.method not in ("exact", "modular"):
            raise ValueError(f"unknown rank method {self.method!r}")
        if self.method == "modular" and (self.prime is None or self.prime <= 1 << 30):
            raise ValueError("modular rank needs a prime above 2**30")
        if self.method == "exact" and self.prime is not None:
            raise ValueError("exact rank carries no prime")

    def __int__(self):
        return self.rank

    def to_dict(self):
        return {"rank": self.rank, "method": self.method, "prime": self.prime}

    @classmethod
    def from_dict(cls, d):
        return cls(d["rank"], d["method"], d.get("prime"))


# ---------------------------------------------------------------------------
# primes


def random_prime(rng: random.Random, bits: int = 31) -> tuple[int, int]:
    """Return ``(p, s)`` with ``2**(bits-1) < p < 2**bits``, ``p = 1 mod 4``
    and ``s*s = -1 (mod p)``."""
    from sympy import isprime

    lo = 1 << (bits - 1)
    while True:
        p = rng.randrange(lo, lo << 1) | 1
        p -= (p % 4) - 1
        if p > lo and isprime(p):
            break
    while True:
        s = pow(rng.randrange(2, p - 1), (p - 1) // 4, p)
        if s * s % p == p - 1:
            return p, s


# ---------------------------------------------------------------------------
# Gaussian-integer row helpers


def _gi_row(values: dict) -> dict:
    """Scale a ``{col: GaussianRational}`` row to coprime Gaussian integers."""
    lcm = 1
    for v in values.values():
        lcm = math.lcm(lcm, v.re.denominator, v.im.denominator)
    out = {}
    for k, v in values.items():
        a = v.re.numerator * (lcm // v.re.denominator)
        b = v.im.numerator * (lcm // v.im.denominator)
        if a or b:
            out[k] = (a, b)
    return _primitive(out)


def _primitive(row: dict) -> dict:
    g = 0
    for a, b in row.values():
        g = math.gcd(g, a, b)
        if g == 1:
            return row
    if g > 1:
        return {k: (a // g, b // g) for k, (a, b) in row.items()}
    return row


def _unit_normalized(row: dict, first) -> dict:
    a, b = row[first]
    if a > 0 and b >= 0:
        return row
    if a <= 0 and b > 0:  # multiply by -i
        return {k: (y, -x) for k, (x, y) in row.items()}
    if a < 0 and b <= 0:
        return {k: (-x, -y) for k, (x, y) in row.items()}
    return {k: (-y, x) for k, (x, y) in row.items()}  # multiply by i


# ---------------------------------------------------------------------------
# echelon back ends


def _real_pivot(row: dict, c) -> dict:
    """Scale ``row`` by conj(row[c]) so that the pivot entry is a positive integer."""
    pa, pb = row[c]
    if pb == 0:
        return row if pa > 0 else {k: (-a, -b) for k, (a, b) in row.items()}
    return _primitive({k: (pa * a + pb * b, pa * b - pb * a) for k, (a, b) in row.items()})


def _eliminate(r: dict, prow: dict, c, heap=None) -> dict:
    """Remove column ``c`` from ``r`` using ``prow`` (whose pivot ``prow[c]`` is a positive integer).

    When the multiplier is not integral the row is scaled by the pivot first
    and then made primitive, which keeps entry sizes polynomial: the row is a
    rational vector stored with a reduced common denominator.
    """
    den = prow[c][0]
    qa, qb = r[c]
    scaled = qa % den or qb % den
    if scaled:
        r = {k: (den * a, den * b) for k, (a, b) in r.items()}
    else:
        qa, qb = qa // den, qb // den
    for k, (a, b) in prow.items():
        xa, xb = qa * a - qb * b, qa * b + qb * a
        y = r.get(k)
        if y is None:
            r[k] = (-xa, -xb)
            if heap is not None:
                heapq.heappush(heap, k)
        else:
            za, zb = y[0] - xa, y[1] - xb
            if za or zb:
                r[k] = (za, zb)
            else:
                del r[k]
    return _primitive(r) if scaled else r


class _ExactEchelon:
    """Incremental row echelon form over Z[i] (leading column = pivot).

    Stored pivot rows are primitive with a positive integer pivot entry.
    """

    method = "exact"
    prime = None

    def __init__(self):
        self.piv: dict[int, dict] = {}

    def convert(self, row):
        return row

    def add(self, row: dict) -> bool:
        """Reduce ``row`` and keep it if independent; return True if kept."""
        r = dict(row)
        heap = list(r)
        heapq.heapify(heap)
        piv = self.piv
        while heap:
            c = heapq.heappop(heap)
            if c not in r:
                continue
            prow = piv.get(c)
            if prow is None:
                piv[c] = _real_pivot(_primitive(r), c)
                return True
            r = _eliminate(r, prow, c, heap)
        return False

    def rank(self):
        return len(self.piv)

    def reduced_rows(self) -> dict:
        """Pivot rows with every other pivot column eliminated (RREF up to scale)."""
        piv = {c: dict(r) for c, r in self.piv.items()}
        for c in sorted(piv, reverse=True):
            r = piv[c]
            for c2 in sorted(k for k in r if k != c and k in piv):
                if c2 in r:
                    r = _eliminate(r, piv[c2], c2)
            piv[c] = _real_pivot(_primitive(r), c)
        return piv


class _ModEchelon:
    """Incremental row echelon form over GF(p) with monic pivots."""

    method = "modular"

    def __init__(self, p: int, s: int):
        self.p = p
        self.s = s
        self.piv: dict[int, dict] = {}

    @property
    def prime(self):
        return self.p

    def convert(self, row):
        p, s = self.p, self.s
        out = {}
        for k, (a, b) in row.items():
            x = (a + b * s) % p
            if x:
                out[k] = x
        return out

    def add(self, r: dict) -> bool:
        p = self.p
        heap = list(r)
        heapq.heapify(heap)
        piv = self.piv
        while heap:
            c = heapq.heappop(heap)
            v = r.get(c)
            if v is None:
                continue
            prow = piv.get(c)
            if prow is None:
                inv = pow(v, -1, p)
                piv[c] = {k: x * inv % p for k, x in r.items()}
                return True
            for k, x in prow.items():
                y = r.get(k)
                if y is None:
                    r[k] = -v * x % p
                    heapq.heappush(heap, k)
                else:
                    z = (y - v * x) % p
                    if z:
                        r[k] = z
                    else:
                        del r[k]
        return False

    def rank(self):
        return len(self.piv)


# ---------------------------------------------------------------------------
# preprocessing


def _peel_and_split(rows: Sequence[dict], ncols: int):
    """Peel singleton rows and split the rest into connected components.

    Returns ``(pinned, components)`` where ``pinned`` lists columns forced to
    zero (each contributes one to the rank) and each component is a pair
    ``(cols, rows)`` of sorted live columns and the rows restricted to them.
    """
    col_rows: dict[int, list[int]] = {}
    count = [0] * len(rows)
    for ri, r in enumerate(rows):
        count[ri] = len(r)
        for c in r:
            col_rows.setdefault(c, []).append(ri)
    dead = set()
    stack = [ri for ri, n in enumerate(count) if n == 1]
    while stack:
        ri = stack.pop()
        if count[ri] != 1:
            continue
        c = next(k for k in rows[ri] if k not in dead)
        dead.add(c)
        for rj in col_rows[c]:
            count[rj] -= 1
            if count[rj] == 1:
                stack.append(rj)
    parent = {}

    def find(x):
        root = x
        while parent.get(root, root) != root:
            root = parent[root]
        while parent.get(x, x) != root:
            parent[x], x = root, parent[x]
        return root

    live_rows = []
    for ri, r in enumerate(rows):
        if count[ri] <= 0:
            continue
        lr = {k: v for k, v in r.items() if k not in dead}
        live_rows.append(lr)
        it = iter(lr)
        first = find(next(it))
        for k in it:
            rk = find(k)
            if rk != first:
                parent[rk] = first
    groups: dict[int, list[dict]] = {}
    for lr in live_rows:
        groups.setdefault(find(next(iter(lr))), []).append(lr)
    comps = []
    for g in groups.values():
        cols = sorted({k for r in g for k in r})
        comps.append((cols, g))
    comps.sort(key=lambda t: t[0][0])
    return sorted(dead), comps


def _dedupe(rows: Iterable[dict], modular_p: int | None) -> list[dict]:
    seen = set()
    out = []
    for r in rows:
        first = min(r)
        if modular_p is None:
            r = _unit_normalized(_primitive(r), first)
            key = tuple(sorted(r.items()))
        else:
            inv = pow(r[first], -1, modular_p)
            r = {k: v * inv % modular_p for k, v in r.items()}
            key = tuple(sorted(r.items()))
        if key not in seen:
            seen.add(key)
            out.append(r)
    out.sort(key=len)
    return out


# ---------------------------------------------------------------------------
# systems


class LinearSystem:
    """Homogeneous system ``A x = 0`` given by sparse Gaussian-integer rows.

    ``rows`` are ``{col: (re, im)}`` maps with integer parts; ``nrows`` is the
    nominal row count used for the ``auto`` size threshold (it may exceed
    ``len(rows)`` when structurally zero rows were never materialised).
    """

    def __init__(self, rows: Iterable[dict], ncols: int, nrows: int | None = None):
        self.rows = [r for r in rows if r]
        self.ncols = ncols
        self.nrows = len(self.rows) if nrows is None else nrows
        for r in self.rows:
            for c in r:
                if not 0 <= c < ncols:
                    raise IndexError(f"column {c} outside 0..{ncols - 1}")
        self._split = None

    @classmethod
    def from_matrix(cls, a: SparseMatrix) -> "LinearSystem":
        return cls((_gi_row(r) for r in a.rows().values()), a.ncols, a.nrows)

    def _components(self):
        if self._split is None:
            self._split = _peel_and_split(self.rows, self.ncols)
        return self._split

    def resolve_mode(self, mode: str, threshold: int = DEFAULT_MODULAR_THRESHOLD) -> str:
        if mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
        if mode == "auto":
            return "modular" if self.nrows * self.ncols > threshold else "exact"
        return mode

    def _rank_with(self, ech_factory):
        pinned, comps = self._components()
        total = len(pinned)
        prime = None
        for cols, rows in comps:
            ech = ech_factory()
            prime = ech.prime
            conv = [ech.convert(r) for r in rows]
            conv = [r for r in conv if r]
            if not conv:
                continue
            for r in _dedupe(conv, prime):
                ech.add(r)
                if ech.rank() == len(cols):
                    break
            total += ech.rank()
        return total

    def rank(self, mode: str = "auto", *, threshold: int = DEFAULT_MODULAR_THRESHOLD,
             rng: random.Random | None = None, checks: int = 2) -> RankResult:
        """Rank over Q(i).

        In modular mode the rank is computed for ``checks`` random primes and
        the largest value is reported; since each is a lower bound, agreement
        between independent primes is the Monte-Carlo certificate.
        """
        mode = self.resolve_mode(mode, threshold)
        if mode == "exact":
            return RankResult(self._rank_with(_ExactEchelon), "exact")
        rng = rng if rng is not None else random.Random(_DEFAULT_SEED)
        best = None
        agree = 0
        for _ in range(max(1, checks) + 3):
            p, s = random_prime(rng)
            r = self._rank_with(lambda: _ModEchelon(p, s))
            if best is None or r > best.rank:
                best = RankResult(r, "modular", p)
                agree = 1
            elif r == best.rank:
                agree += 1
            if agree >= checks:
                break
        return best

    def nullity(self, mode: str = "auto", **kw) -> int:
        return self.ncols - self.rank(mode, **kw).rank

    def nullspace(self) -> list[dict]:
        """Exact nullspace basis as ``{col: GaussianRational}`` maps.

        The basis is not canonicalised here; see :func:`canonical_basis`.
        """
        pinned, comps = self._components()
        used = set(pinned)
        basis = []
        for cols, rows in comps:
            used.update(cols)
            ech = _ExactEchelon()
            for r in _dedupe(rows, None):
                ech.add(r)
                if ech.rank() == len(cols):
                    break
            if ech.rank() == len(cols):
                continue
            red = ech.reduced_rows()
            by_free: dict[int, list] = {}
            for c, r in red.items():
                pv = r[c]
                for k, x in r.items():
                    if k != c:
                        by_free.setdefault(k, []).append((c, x, pv))
            for f in cols:
                if f in red:
                    continue
                v = {f: GaussianRational(1)}
                for c, x, pv in by_free.get(f, ()):
                    v[c] = -GaussianRational(*x) / GaussianRational(*pv)
                basis.append(v)
        for c in range(self.ncols):
            if c not in used:
                basis.append({c: GaussianRational(1)})
        return basis


# ---------------------------------------------------------------------------
# public matrix-level API


def rank(a: SparseMatrix, mode: str = "auto", *, threshold: int = DEFAULT_MODULAR_THRESHOLD,
         rng: random.Random | None = None) -> RankResult:
    """Rank of ``a`` over the Gaussian rationals.

    >>> rank(SparseMatrix.identity(3), "exact")
    RankResult(rank=3, method='exact', prime=None)
    """
    return LinearSystem.from_matrix(a).rank(mode, threshold=threshold, rng=rng)


def _vectors_to_columns(vs: list[dict], n: int) -> list[SparseMatrix]:
    return [SparseMatrix._trusted(n, 1, {(k, 0): x for k, x in v.items()}) for v in vs]


def canonical_basis_maps(vectors: Sequence[dict]) -> list[dict]:
    """Reduced echelon form of the span of ``{index: GaussianRational}`` maps.

    Each returned vector has a leading (smallest-index) entry equal to 1, and
    that index is zero in every other vector, so the output depends only on
    the span.
    """
    piv: dict[int, dict] = {}

    def axpy(target, f, src):
        # target -= f * src
        for k, x in src.items():
            y = target.get(k)
            z = -f * x if y is None else y - f * x
            if z:
                target[k] = z
            else:
                target.pop(k, None)

    for v in vectors:
        r = {k: x for k, x in v.items() if x}
        for c in [c for c in r if c in piv]:
            f = r.get(c)
            if f:
                axpy(r, f, piv[c])
        if not r:
            continue
        c = min(r)
        inv = 1 / r[c]
        r = {k: x * inv for k, x in r.items()}
        for other in piv.values():
            f = other.get(c)
            if f:
                axpy(other, f, r)
        piv[c] = r
    return [piv[c] for c in sorted(piv)]


def canonical_basis(vectors: Sequence[SparseMatrix]) -> list[SparseMatrix]:
    """Reduced column echelon form of the span of column vectors."""
    if not vectors:
        return []
    n = vectors[0].nrows
    maps = []
    for v in vectors:
        if v.shape != (n, 1):
            raise DimensionMismatch("canonical_basis expects column vectors of equal length")
        maps.append({i: x for (i, _), x in v.items()})
    return _vectors_to_columns(canonical_basis_maps(maps), n)


def nullspace_basis(a: SparseMatrix) -> list[SparseMatrix]:
    """Exact right nullspace of ``a`` in reduced column echelon form."""
    sysm = LinearSystem.from_matrix(a)
    return _vectors_to_columns(canonical_basis_maps(sysm.nullspace()), a.ncols)


def _real_row(m: SparseMatrix) -> dict:
    ncols = m.ncols
    vals = {}
    for (i, j), v in m.items():
        base = 2 * (i * ncols + j)
        if v.re:
            vals[base] = GaussianRational(v.re)
        if v.im:
            vals[base + 1] = GaussianRational(v.im)
    return _gi_row(vals) if vals else {}


def real_span_rank(mats: Sequence[SparseMatrix]) -> int:
    """Dimension over R of the span of ``mats`` (exact, via (re, im) coordinates)."""
    mats = list(mats)
    if not mats:
        return 0
    shape = mats[0].shape
    if any(m.shape != shape for m in mats):
        raise DimensionMismatch("real_span_rank needs matrices of equal shape")
    ech = _ExactEchelon()
    for m in mats:
        r = _real_row(m)
        if r:
            ech.add(r)
    return ech.rank()


def span_contains(basis: Sequence[SparseMatrix], target: SparseMatrix) -> bool:
    """True if ``target`` lies in the complex span of ``basis`` (exact)."""
    def row(m):
        return _gi_row({i * m.ncols + j: v for (i, j), v in m.items()})

    ech = _ExactEchelon()
    for b in basis:
        if b.shape != target.shape:
            raise DimensionMismatch("span_contains needs equal shapes")
        r = row(b)
        if r:
            ech.add(r)
    t = row(target)
    return not t or not ech.add(t)

