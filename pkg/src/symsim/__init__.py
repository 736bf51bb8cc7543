"""Exact symmetry-based test for Hamiltonian simulability.

A set P of control Hamiltonians simulates targets Q when the Lie closures
of P and of P u Q coincide.  This package decides that question with exact
linear algebra: it compares the dimensions of the tensor-square commutants
(quadratic symmetries) and the ranks of the projections onto the center of
the commutant.  A brute-force Lie closure serves as an independent check.
"""

__version__ = "0.1.0"

from .closure import AlgebraDecomposition, LieBasis, OracleVerdict, decompose, lie_closure, oracle_verdict
from .errors import (
    BadArity,
    BudgetExceeded,
    DimensionMismatch,
    EmptyGeneratorSet,
    IndexOutOfRange,
    NotClosed,
    NotNormalized,
    NotSkewHermitian,
    NotUnitTrace,
    ParseError,
    SymsimError,
    UnknownFixture,
)
from .fileformat import InstanceFile, instance_file_for, parse_instance_file
from .gaussian import GaussianRational, parse_gaussian
from .instances import ProblemInstance, central_spin_couplings, central_spin_instance, example_fixture
from .linalg import RankResult, canonical_basis, nullspace_basis, rank, real_span_rank
from .pauli import PauliPolynomial, PauliTerm, parse_pauli, realize, skewify
from .sparse import SparseMatrix, commutator, hs_inner, kron, swap_matrix, unvec, vec
from .symmetry import (
    CentralProjectionData,
    MutualReport,
    SimulabilityReport,
    SymmetryBasis,
    center_of_commutant,
    central_projections,
    commutant,
    concurrence_squared,
    constraint_operator,
    decide,
    decide_mutual,
    quadratic_commutant,
    quadratic_invariant,
    tensor_square_lift,
)

__all__ = [name for name in dir() if not name.startswith("_")]
