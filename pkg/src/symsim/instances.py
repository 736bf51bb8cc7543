"""Problem instances: generator sets P (available) and Q (targets)."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import BadArity, DimensionMismatch, EmptyGeneratorSet, NotSkewHermitian, UnknownFixture
from .pauli import PauliPolynomial, PauliTerm, parse_pauli, skewify

__all__ = [
    "ProblemInstance",
    "central_spin_instance",
    "central_spin_couplings",
    "example_fixture",
    "FIXTURES",
]


@dataclass(frozen=True)
class ProblemInstance:
    """Skew-Hermitian generators ``p_set`` (given) and ``q_set`` (targets).

    When the instance was built from Pauli expressions, ``nqubits`` and the
    Hermitian polynomials ``p_polys``/``q_polys`` are kept alongside so the
    instance can be written back as text.
    """

    dim: int
    p_set: tuple
    q_set: tuple = ()
    p_labels: tuple = ()
    q_labels: tuple = ()
    nqubits: int | None = None
    p_polys: tuple = field(default=(), compare=False)
    q_polys: tuple = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "p_set", tuple(self.p_set))
        object.__setattr__(self, "q_set", tuple(self.q_set))
        if not self.p_set:
            raise EmptyGeneratorSet("the given set P must contain at least one generator")
        for name, mats in (("P", self.p_set), ("Q", self.q_set)):
            for k, m in enumerate(mats):
                if m.shape != (self.dim, self.dim):
                    raise DimensionMismatch(f"{name}[{k}] has shape {m.shape}, expected {self.dim}x{self.dim}")
                if not m.is_skew_hermitian():
                    raise NotSkewHermitian(f"{name}[{k}] is not skew-Hermitian")
        if not self.p_labels:
            object.__setattr__(self, "p_labels", tuple(f"P{k + 1}" for k in range(len(self.p_set))))
        if not self.q_labels:
            object.__setattr__(self, "q_labels", tuple(f"Q{k + 1}" for k in range(len(self.q_set))))
        if len(self.p_labels) != len(self.p_set) or len(self.q_labels) != len(self.q_set):
            raise BadArity("one label per generator is required")

    @classmethod
    def from_pauli(cls, nqubits: int, p_polys: Sequence, q_polys: Sequence = (), **kw) -> "ProblemInstance":
        """Build from Hermitian Pauli polynomials (or expression strings)."""
        def conv(x):
            return parse_pauli(x, nqubits) if isinstance(x, str) else x

        pp = tuple(conv(x) for x in p_polys)
        qq = tuple(conv(x) for x in q_polys)
        return cls(
            dim=1 << nqubits,
            p_set=tuple(skewify(p) for p in pp),
            q_set=tuple(skewify(q) for q in qq),
            nqubits=nqubits,
            p_polys=pp,
            q_polys=qq,
            **kw,
        )

    @property
    def generators(self) -> tuple:
        """``P`` followed by ``Q``."""
        return self.p_set + self.q_set

    def swapped(self) -> "ProblemInstance":
        """The instance asking whether Q simulates P (Q must be non-empty)."""
        return ProblemInstance(
            self.dim, self.q_set, self.p_set, self.q_labels, self.p_labels,
            self.nqubits, self.q_polys, self.p_polys,
        )


def _heisenberg_star(n: int, couplings) -> PauliPolynomial:
    terms = [PauliTerm(((1, "X"),), 1)]
    for k, j in zip(range(2, n + 1), couplings):
        for p in "XYZ":
            terms.append(PauliTerm(((1, p), (k, p)), j))
    return PauliPolynomial(n, terms)


def central_spin_couplings(n: int, case: str) -> list[Fraction]:
    """Couplings ``J_2..J_n``: case ``a`` all ones, case ``b`` 2 on even k."""
    if case == "a":
        return [Fraction(1)] * (n - 1)
    if case == "b":
        return [Fraction(2 if k % 2 == 0 else 1) for k in range(2, n + 1)]
    raise UnknownFixture(f"unknown central-spin case {case!r} (use 'a' or 'b')")


def central_spin_instance(n: int, couplings: Sequence) -> ProblemInstance:
    """Central spin coupled to ``n-1`` bath spins on a star graph.

    P holds the drift ``X1 + sum_k J_k (X1 Xk + Y1 Yk + Z1 Zk)`` and the
    control ``Z1``; the target is ``X1``.
    """
    if n < 2:
        raise BadArity("the central-spin model needs n >= 2")
    couplings = [Fraction(c) for c in couplings]
    if len(couplings) != n - 1:
        raise BadArity(f"expected {n - 1} couplings J_2..J_{n}, got {len(couplings)}")
    drift = _heisenberg_star(n, couplings)
    control = PauliPolynomial.from_factors(n, {1: "Z"})
    target = PauliPolynomial.from_factors(n, {1: "X"})
    return ProblemInstance.from_pauli(
        n, [drift, control], [target], p_labels=("drift", "Z1"), q_labels=("X1",)
    )


FIXTURES = {
    "ex1": (2, ["X1", "Y1", "X2", "Y2"], ["Z1*Z2"]),
    "ex2a": (2, ["2*Z1*Z2 - X1*X2 - Y1*Y2", "X1 - Y1 + X2 - Y2"], ["X1*X2 + Y1*Y2 + Z1*Z2"]),
    "ex2b": (2, ["2*Z1*Z2 - X1*X2 - Y1*Y2", "X1 - Y1 + X2 - Y2"], ["X1*Z2 + Z1*X2 + Y1*Z2 + Z1*Y2"]),
}


def example_fixture(name: str) -> ProblemInstance:
    """Two-qubit examples: local controls vs ZZ (``ex1``) and the dipole
    coupling in a tilted field with Heisenberg (``ex2a``) or pairing
    (``ex2b``) targets."""
    try:
        n, p, q = FIXTURES[name]
    except KeyError:
        raise UnknownFixture(f"unknown fixture {name!r}; choose from {sorted(FIXTURES)}") from None
    return ProblemInstance.from_pauli(n, p, q)
