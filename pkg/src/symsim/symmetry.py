"""Linear and quadratic symmetries and the simulability decision.

A set P of skew-Hermitian generators simulates Q (the Lie closures of P and
P u Q coincide) exactly when

(A) the tensor-square commutants of P and P u Q have equal dimension, and
(B) the Hilbert-Schmidt pairings ``Tr(C_a^dagger G_b)`` of the generators
    against a basis ``C_a`` of the center of the commutant of P u Q have the
    same rank whether ``G_b`` runs over P or over P u Q.
"""

from __future__ import annotations

import math
import random
import time
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import DimensionMismatch, NotNormalized, NotUnitTrace
from .gaussian import ONE, GaussianRational
from .instances import ProblemInstance
from .linalg import (
    DEFAULT_MODULAR_THRESHOLD,
    LinearSystem,
    RankResult,
    canonical_basis_maps,
    rank,
)
from .sparse import SparseMatrix, hs_inner, kron

__all__ = [
    "SymmetryBasis",
    "CentralProjectionData",
    "SimulabilityReport",
    "MutualReport",
    "commutant",
    "commutant_dimension",
    "tensor_square_lift",
    "constraint_operator",
    "quadratic_commutant",
    "quadratic_commutant_dimension",
    "center_of_commutant",
    "central_projections",
    "decide",
    "decide_mutual",
    "quadratic_invariant",
    "concurrence_squared",
    "permutation_operator",
]


@dataclass(frozen=True)
class SymmetryBasis:
    dim: int
    basis: tuple
    kind: str

    def __post_init__(self):
        if self.kind not in ("linear", "quadratic"):
            raise ValueError(f"unknown symmetry kind {self.kind!r}")
        object.__setattr__(self, "basis", tuple(self.basis))
        if self.dim != len(self.basis):
            raise ValueError("dim must equal the number of basis elements")

    def __len__(self):
        return self.dim

    def __iter__(self):
        return iter(self.basis)


# ---------------------------------------------------------------------------
# Sylvester systems


def _check_square(mats: Sequence[SparseMatrix], dim: int | None = None) -> int:
    if not mats:
        if dim is None:
            raise ValueError("dimension is required when no generators are given")
        return dim
    d = mats[0].nrows
    for m in mats:
        if not m.is_square() or m.nrows != d:
            raise DimensionMismatch(f"generators must be square of equal size, got {m.shape} vs {d}x{d}")
    if dim is not None and dim != d:
        raise DimensionMismatch(f"generators are {d}x{d}, expected {dim}x{dim}")
    return d


def _gi_matrix(m: SparseMatrix) -> dict:
    """Entries of a positive rational multiple of ``m`` with Gaussian-integer values."""
    lcm = 1
    for v in m._e.values():
        lcm = math.lcm(lcm, v.re.denominator, v.im.denominator)
    return {
        k: (v.re.numerator * (lcm // v.re.denominator), v.im.numerator * (lcm // v.im.denominator))
        for k, v in m._e.items()
    }


def _sylvester_rows(g: dict, n: int) -> list[dict]:
    """Rows of ``vec(S G - G S) = 0`` in the unknowns ``vec(S)`` (column-major)."""
    rows_of = defaultdict(list)
    cols_of = defaultdict(list)
    diag = {}
    for (i, j), v in g.items():
        if i == j:
            diag[i] = v
        else:
            rows_of[i].append((j, v))
            cols_of[j].append((i, v))
    out = []
    zero = (0, 0)
    for b in range(n):
        cb = cols_of.get(b, ())
        gb = diag.get(b, zero)
        base_b = b * n
        for a in range(n):
            ra = rows_of.get(a, ())
            ga = diag.get(a, zero)
            dv = (gb[0] - ga[0], gb[1] - ga[1])
            if not cb and not ra and not (dv[0] or dv[1]):
                continue
            r = {}
            for c, v in cb:
                r[c * n + a] = v
            for c, (x, y) in ra:
                r[base_b + c] = (-x, -y)
            if dv[0] or dv[1]:
                r[base_b + a] = dv
            out.append(r)
    return out


def _commutant_system(mats: Sequence[SparseMatrix], n: int) -> LinearSystem:
    rows = []
    for m in mats:
        rows.extend(_sylvester_rows(_gi_matrix(m), n))
    return LinearSystem(rows, n * n, nrows=len(mats) * n * n)


def _maps_to_matrices(maps, n: int) -> list[SparseMatrix]:
    return [
        SparseMatrix._trusted(n, n, {(k % n, k // n): x for k, x in v.items()})
        for v in maps
    ]


def _matrix_map(m: SparseMatrix) -> dict:
    n = m.nrows
    return {j * n + i: v for (i, j), v in m.items()}


def commutant(generators: Sequence[SparseMatrix], dim: int | None = None) -> SymmetryBasis:
    """Canonical basis of ``{S : [S, M] = 0 for all generators M}``.

    >>> commutant([], dim=2).dim
    4
    """
    gens = list(generators)
    d = _check_square(gens, dim)
    maps = canonical_basis_maps(_commutant_system(gens, d).nullspace())
    return SymmetryBasis(len(maps), tuple(_maps_to_matrices(maps, d)), "linear")


def commutant_dimension(generators: Sequence[SparseMatrix], dim: int | None = None,
                        mode: str = "auto", **kw) -> tuple[int, RankResult]:
    """``(dim M', rank)`` where ``rank`` is the stacked constraint rank."""
    gens = list(generators)
    d = _check_square(gens, dim)
    r = _commutant_system(gens, d).rank(mode, **kw)
    return d * d - r.rank, r


# ---------------------------------------------------------------------------
# tensor square


def tensor_square_lift(m: SparseMatrix) -> SparseMatrix:
    """``m (x) 1 + 1 (x) m``."""
    if not m.is_square():
        raise DimensionMismatch("tensor_square_lift needs a square matrix")
    one = SparseMatrix.identity(m.nrows)
    return kron(m, one) + kron(one, m)


def constraint_operator(m: SparseMatrix) -> SparseMatrix:
    """The ``d**4 x d**4`` operator ``D(m)`` with ``D(m) vec(S) = vec([L, S])``
    for the lift ``L = m (x) 1 + 1 (x) m``."""
    lift = tensor_square_lift(m)
    one = SparseMatrix.identity(lift.nrows)
    return kron(one, lift) - kron(lift.transpose(), one)


def _adapted_basis(d: int) -> tuple[SparseMatrix, SparseMatrix]:
    """Columns of ``T`` span Sym^2 then Alt^2 of C^d; returns ``(T, T^-1)``."""
    half = GaussianRational(Fraction(1, 2))
    t, tinv = {}, {}
    k = 0
    for a in range(d):
        for b in range(a, d):
            ab, ba = a * d + b, b * d + a
            if a == b:
                t[(ab, k)] = ONE
                tinv[(k, ab)] = ONE
            else:
                t[(ab, k)] = ONE
                t[(ba, k)] = ONE
                tinv[(k, ab)] = half
                tinv[(k, ba)] = half
            k += 1
    for a in range(d):
        for b in range(a + 1, d):
            ab, ba = a * d + b, b * d + a
            t[(ab, k)] = ONE
            t[(ba, k)] = -ONE
            tinv[(k, ab)] = half
            tinv[(k, ba)] = -half
            k += 1
    n = d * d
    return SparseMatrix._trusted(n, n, t), SparseMatrix._trusted(n, n, tinv)


def _adapted_lifts(gens: Sequence[SparseMatrix], d: int):
    """Lifts in a basis where the swap is diagonal; the lifted system then
    splits into Sym/Alt blocks, which the component split exploits."""
    t, tinv = _adapted_basis(d)
    return [tinv @ tensor_square_lift(g) @ t for g in gens], t, tinv


def quadratic_commutant_dimension(generators: Sequence[SparseMatrix], dim: int | None = None,
                                  mode: str = "auto", **kw) -> tuple[int, RankResult]:
    """``(dim ts(G), rank)`` of the tensor-square commutant."""
    gens = list(generators)
    d = _check_square(gens, dim)
    lifts, _, _ = _adapted_lifts(gens, d)
    r = _commutant_system(lifts, d * d).rank(mode, **kw)
    return d ** 4 - r.rank, r


def quadratic_commutant(generators: Sequence[SparseMatrix], dim: int | None = None,
                        direct: bool = False) -> SymmetryBasis:
    """Canonical basis of the tensor-square commutant ``(G^{(x)2})'``.

    ``direct=True`` solves the stacked ``D(M) vec(S) = 0`` equations in the
    product basis; the default solves the same system after conjugating the
    lifts into the Sym/Alt basis (identical result, much smaller components).
    """
    gens = list(generators)
    d = _check_square(gens, dim)
    n = d * d
    if direct:
        sysm = _commutant_system([tensor_square_lift(g) for g in gens], n)
        maps = sysm.nullspace()
    else:
        lifts, t, tinv = _adapted_lifts(gens, d)
        sysm = _commutant_system(lifts, n)
        mats = _maps_to_matrices(sysm.nullspace(), n)
        maps = [_matrix_map(t @ s @ tinv) for s in mats]
    maps = canonical_basis_maps(maps)
    return SymmetryBasis(len(maps), tuple(_maps_to_matrices(maps, n)), "quadratic")


# ---------------------------------------------------------------------------
# center and central projections


def center_of_commutant(generators: Sequence[SparseMatrix], dim: int | None = None) -> list[SparseMatrix]:
    """Canonical basis of the center of the commutant of ``generators``."""
    gens = list(generators)
    d = _check_square(gens, dim)
    sym = commutant(gens, d)
    if sym.dim == 1:
        return list(sym.basis)
    return list(commutant(gens + list(sym.basis), d).basis)


@dataclass(frozen=True)
class CentralProjectionData:
    center_basis: tuple
    t_full: SparseMatrix
    t_restricted: SparseMatrix
    rank_full: RankResult
    rank_restricted: RankResult


def central_projections(center_basis: Sequence[SparseMatrix], p_set: Sequence[SparseMatrix],
                        q_set: Sequence[SparseMatrix], mode: str = "exact") -> CentralProjectionData:
    """``T[a, b] = Tr(C_a^dagger G_b)`` over P then Q, and its P-columns."""
    cb = list(center_basis)
    gens = list(p_set) + list(q_set)
    shapes = {m.shape for m in cb + gens}
    if len(shapes) > 1:
        raise DimensionMismatch(f"inconsistent shapes {sorted(shapes)}")
    p = len(p_set)
    full = {}
    for a, c in enumerate(cb):
        for b, g in enumerate(gens):
            full[(a, b)] = hs_inner(c, g)
    t_full = SparseMatrix(len(cb), len(gens), full)
    t_restr = SparseMatrix(len(cb), p, {k: v for k, v in full.items() if k[1] < p})
    return CentralProjectionData(
        tuple(cb), t_full, t_restr, rank(t_full, mode), rank(t_restr, mode)
    )


# ---------------------------------------------------------------------------
# decision


@dataclass(frozen=True)
class SimulabilityReport:
    """Outcome of the symmetry test plus every intermediate quantity."""

    verdict: str
    condition_a: str
    quadratic_dims: tuple
    condition_b: str
    projection_ranks: tuple | None
    linear_dims: tuple
    center_dim: int | None
    failure_witness: str | None
    quadratic_ranks: tuple = ()
    projections: CentralProjectionData | None = field(default=None, compare=False)
    monte_carlo: bool = False
    timings: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        holds = self.condition_a == "holds" and self.condition_b == "holds"
        if (self.verdict == "simulable") != holds:
            raise ValueError("verdict inconsistent with conditions")
        if self.condition_b == "skipped" and self.condition_a != "fails":
            raise ValueError("condition (B) may only be skipped after (A) fails")

    @property
    def simulable(self) -> bool:
        return self.verdict == "simulable"


def decide(instance: ProblemInstance, mode: str = "auto", *, force_condition_b: bool = False,
           threshold: int = DEFAULT_MODULAR_THRESHOLD, rng: random.Random | None = None) -> SimulabilityReport:
    """Decide whether P simulates Q by comparing symmetries."""
    p_set = list(instance.p_set)
    q_set = list(instance.q_set)
    both = p_set + q_set
    d = instance.dim
    kw = {"threshold": threshold, "rng": rng}
    timings = {}

    t0 = time.perf_counter()
    qp, rp = quadratic_commutant_dimension(p_set, d, mode, **kw)
    if q_set:
        qpq, rpq = quadratic_commutant_dimension(both, d, mode, **kw)
    else:
        qpq, rpq = qp, rp
    timings["quadratic"] = time.perf_counter() - t0
    cond_a = "holds" if qp == qpq else "fails"

    t0 = time.perf_counter()
    lp, _ = commutant_dimension(p_set, d, "exact")
    lpq = commutant_dimension(both, d, "exact")[0] if q_set else lp
    timings["linear"] = time.perf_counter() - t0

    proj = None
    cond_b = "skipped"
    ranks = None
    center_dim = None
    if cond_a == "holds" or force_condition_b:
        t0 = time.perf_counter()
        center = center_of_commutant(both, d)
        proj = central_projections(center, p_set, q_set, "exact")
        timings["center"] = time.perf_counter() - t0
        center_dim = len(center)
        ranks = (proj.rank_restricted.rank, proj.rank_full.rank)
        cond_b = "holds" if ranks[0] == ranks[1] else "fails"

    witness = None
    if cond_a == "fails":
        witness = f"condition (A) fails: dim ts(P) = {qp} but dim ts(P u Q) = {qpq}"
    elif cond_b == "fails":
        witness = f"condition (B) fails: rank(T~) = {ranks[0]} but rank(T) = {ranks[1]}"
    simulable = cond_a == "holds" and cond_b == "holds"
    return SimulabilityReport(
        verdict="simulable" if simulable else "not_simulable",
        condition_a=cond_a,
        quadratic_dims=(qp, qpq),
        condition_b=cond_b,
        projection_ranks=ranks,
        linear_dims=(lp, lpq),
        center_dim=center_dim,
        failure_witness=witness,
        quadratic_ranks=(rp, rpq),
        projections=proj,
        monte_carlo=rp.method == "modular" or rpq.method == "modular",
        timings=timings,
    )


@dataclass(frozen=True)
class MutualReport:
    relation: str
    forward: SimulabilityReport
    backward: SimulabilityReport


def decide_mutual(p_set: Sequence[SparseMatrix], q_set: Sequence[SparseMatrix],
                  mode: str = "auto", **kw) -> MutualReport:
    """Compare the Lie algebras generated by P and Q.

    ``relation`` is ``equal`` (each simulates the other), ``p_strictly_larger``
    (P simulates Q only), ``q_strictly_larger`` or ``incomparable``.
    """
    p_set, q_set = list(p_set), list(q_set)
    d = _check_square(p_set + q_set)
    fwd = decide(ProblemInstance(d, p_set, q_set), mode, **kw)
    bwd = decide(ProblemInstance(d, q_set, p_set), mode, **kw)
    relation = {
        (True, True): "equal",
        (True, False): "p_strictly_larger",
        (False, True): "q_strictly_larger",
        (False, False): "incomparable",
    }[(fwd.simulable, bwd.simulable)]
    return MutualReport(relation, fwd, bwd)


# ---------------------------------------------------------------------------
# polynomial invariants


def quadratic_invariant(rho: SparseMatrix, s: SparseMatrix) -> GaussianRational:
    """``Tr[(rho (x) rho) s]`` for a unit-trace ``rho``."""
    d = rho.nrows
    if not rho.is_square() or s.shape != (d * d, d * d):
        raise DimensionMismatch(f"rho {rho.shape} and s {s.shape} are incompatible")
    if rho.trace() != 1:
        raise NotUnitTrace(f"Tr(rho) = {rho.trace()}, expected 1")
    return (kron(rho, rho) @ s).trace()


def permutation_operator(perm: Sequence[int], nfactors: int, local_dim: int = 2) -> SparseMatrix:
    """Operator ``M_perm`` on ``(C^local_dim)^(x) nfactors`` permuting tensor factors.

    ``perm[k]`` (0-based) is where factor ``k`` is sent; factor 0 is the
    leftmost Kronecker factor.
    """
    if sorted(perm) != list(range(nfactors)):
        raise ValueError(f"{perm} is not a permutation of {nfactors} factors")
    dim = local_dim ** nfactors
    e = {}
    for idx in range(dim):
        digits = []
        x = idx
        for _ in range(nfactors):
            digits.append(x % local_dim)
            x //= local_dim
        digits.reverse()
        out = [0] * nfactors
        for k, v in enumerate(digits):
            out[perm[k]] = v
        j = 0
        for v in out:
            j = j * local_dim + v
        e[(j, idx)] = ONE
    return SparseMatrix._trusted(dim, dim, e)


def _cycles_to_perm(cycles, n):
    perm = list(range(n))
    for cyc in cycles:
        for k, a in enumerate(cyc):
            perm[a - 1] = cyc[(k + 1) % len(cyc)] - 1
    return perm


_CONCURRENCE_OP = None


def _concurrence_operator() -> SparseMatrix:
    global _CONCURRENCE_OP
    if _CONCURRENCE_OP is None:
        one = SparseMatrix.identity(16)
        m13 = permutation_operator(_cycles_to_perm([(1, 3)], 4), 4)
        m24 = permutation_operator(_cycles_to_perm([(2, 4)], 4), 4)
        _CONCURRENCE_OP = one - m13 - m24 + m13 @ m24
    return _CONCURRENCE_OP


def concurrence_squared(psi: SparseMatrix, normalize: bool = False) -> GaussianRational:
    """Squared concurrence of a two-qubit pure state.

    Evaluates ``<psi|<psi| (1 - M13 - M24 + M13 M24) |psi>|psi>`` where
    ``M13``/``M24`` swap qubit 1 (2) of the first copy with qubit 1 (2) of
    the second.  With ``normalize=True`` an unnormalised state is accepted and
    the value is divided by ``<psi|psi>**2``, which keeps states such as
    ``|00> + |11>`` exact.
    """
    if psi.shape != (4, 1):
        raise DimensionMismatch(f"expected a 4-component column vector, got {psi.shape}")
    norm = (psi.adjoint() @ psi)[0, 0]
    if norm == 0:
        raise NotNormalized("zero vector")
    if not normalize and norm != 1:
        raise NotNormalized(f"<psi|psi> = {norm}, expected 1")
    pp = kron(psi, psi)
    value = (pp.adjoint() @ _concurrence_operator() @ pp)[0, 0]
    return value / (norm * norm)

