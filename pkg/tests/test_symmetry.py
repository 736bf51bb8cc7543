import random
from fractions import Fraction

import pytest
from conftest import random_matrix, random_pauli_instance, random_skew

from symsim.closure import lie_closure
from symsim.errors import DimensionMismatch, NotNormalized, NotUnitTrace
from symsim.gaussian import GaussianRational
from symsim.instances import ProblemInstance, central_spin_instance, example_fixture
from symsim.linalg import span_contains
from symsim.pauli import parse_pauli, skewify
from symsim.sparse import SparseMatrix, commutator, kron, swap_matrix, vec
from symsim.symmetry import (
    center_of_commutant,
    central_projections,
    commutant,
    commutant_dimension,
    concurrence_squared,
    constraint_operator,
    decide,
    decide_mutual,
    permutation_operator,
    quadratic_commutant,
    quadratic_commutant_dimension,
    quadratic_invariant,
    tensor_square_lift,
)

i_ = GaussianRational(0, 1)
ONE4 = SparseMatrix.identity(4)

# the commuting basis displayed for the dipole example
DISPLAYED_CENTER = [
    ONE4,
    swap_matrix(2),
    SparseMatrix.from_dense([[0, 0, 0, 1], [0, 0, -i_, 0], [0, -i_, 0, 0], [-1, 0, 0, 0]]),
]


def gens(*exprs, n=2):
    return [skewify(parse_pauli(e, n)) for e in exprs]


# --- commutant ----------------------------------------------------------------


def test_commutant_example_one_trivial():
    inst = example_fixture("ex1")
    basis = commutant(inst.generators)
    assert basis.dim == 1 and basis.basis == (ONE4,)


def test_commutant_example_two_matches_displayed_basis():
    inst = example_fixture("ex2a")
    basis = commutant(inst.p_set)
    assert basis.dim == 3
    for c in DISPLAYED_CENTER:
        assert span_contains(basis.basis, c)


def test_commutant_empty_generators():
    assert commutant([], dim=2).dim == 4
    with pytest.raises(ValueError):
        commutant([])


def test_commutant_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        commutant([SparseMatrix.identity(2), SparseMatrix.identity(4)])


def test_commutant_elements_commute(rng):
    for _ in range(5):
        g = [random_skew(rng, 3), SparseMatrix.diag([1, 1, 2]).scale(i_)]
        for s in commutant(g).basis:
            assert all(commutator(s, m).is_zero() for m in g)


def test_commutant_is_canonical():
    inst = example_fixture("ex2a")
    shuffled = [inst.p_set[1], inst.p_set[0].scale(3)]
    assert commutant(inst.p_set).basis == commutant(shuffled).basis


# --- tensor square --------------------------------------------------------------


def test_tensor_square_lift_trivial():
    assert tensor_square_lift(SparseMatrix.zeros(3)).is_zero()
    assert tensor_square_lift(SparseMatrix.identity(3)) == SparseMatrix.identity(9).scale(2)


def test_swap_commutes_with_lift(rng):
    for d in (2, 3):
        m = random_matrix(rng, d)
        assert commutator(swap_matrix(d), tensor_square_lift(m)).is_zero()


def test_constraint_operator_basics(rng):
    assert constraint_operator(SparseMatrix.zeros(2)).is_zero()
    m = random_matrix(rng, 2)
    d = constraint_operator(m)
    assert d.shape == (16, 16)
    assert (d @ vec(swap_matrix(2))).is_zero()
    lift = tensor_square_lift(m)
    s = random_matrix(rng, 4)
    assert d @ vec(s) == vec(lift @ s - s @ lift)


def test_constraint_operator_homomorphism(rng):
    for _ in range(5):
        m1, m2 = random_matrix(rng, 2), random_matrix(rng, 2)
        d1, d2 = constraint_operator(m1), constraint_operator(m2)
        assert commutator(d1, d2) == constraint_operator(commutator(m1, m2))


@pytest.mark.parametrize(
    "generators, expected",
    [
        (gens("X1", "Y1", "X2", "Y2"), 4),
        (gens("X1", "Y1", "X2", "Y2", "Z1*Z2"), 2),
        (gens("X1", "Y1", n=1), 2),
    ],
)
def test_quadratic_commutant_dims(generators, expected):
    q = quadratic_commutant(generators)
    assert q.dim == expected and q.kind == "quadratic"
    assert quadratic_commutant_dimension(generators)[0] == expected


def test_quadratic_fast_path_equals_direct_solve():
    spin1 = SparseMatrix.from_dense([[0, 1, 0], [-1, 0, 1], [0, -1, 0]])
    cases = [
        gens("X1", "Y1", "X2", "Y2"),
        list(example_fixture("ex2a").p_set),
        [spin1, SparseMatrix.diag([i_, 0, -i_])],
    ]
    for g in cases:
        assert quadratic_commutant(g) == quadratic_commutant(g, direct=True)


def test_quadratic_basis_commutes_with_lifts():
    g = list(example_fixture("ex2b").generators)
    lifts = [tensor_square_lift(m) for m in g]
    q = quadratic_commutant(g)
    assert q.dim == 16
    for s in q.basis:
        assert all(commutator(s, l_).is_zero() for l_ in lifts)


@pytest.mark.parametrize("mode", ["exact", "modular"])
def test_quadratic_dimension_modes(mode):
    g = list(example_fixture("ex2a").p_set)
    dim, r = quadratic_commutant_dimension(g, mode=mode)
    assert dim == 16 and r.method == mode


# --- center and projections -------------------------------------------------------


def test_center_example_two():
    inst = example_fixture("ex2a")
    center = center_of_commutant(inst.generators)
    assert len(center) == 3
    for c in DISPLAYED_CENTER:
        assert span_contains(center, c)


def test_center_fully_controllable():
    assert center_of_commutant(example_fixture("ex1").generators) == [ONE4]


def test_center_contained_in_commutant_and_central():
    inst = central_spin_instance(2, [1])
    g = list(inst.p_set)
    comm = commutant(g).basis
    for c in center_of_commutant(g):
        assert span_contains(comm, c)
        assert all(commutator(c, s).is_zero() for s in comm)


def test_central_projections_displayed_basis():
    a = example_fixture("ex2a")
    data = central_projections(DISPLAYED_CENTER, a.p_set, a.q_set)
    assert data.t_full == SparseMatrix.from_dense([[0, 0, 0], [0, 0, 6 * i_], [4, 0, -4]])
    assert data.t_restricted == SparseMatrix.from_dense([[0, 0], [0, 0], [4, 0]])
    assert (data.rank_full.rank, data.rank_restricted.rank) == (2, 1)
    b = example_fixture("ex2b")
    data = central_projections(DISPLAYED_CENTER, b.p_set, b.q_set)
    assert data.t_full == SparseMatrix.from_dense([[0, 0, 0], [0, 0, 0], [4, 0, 0]])
    assert (data.rank_full.rank, data.rank_restricted.rank) == (1, 1)


def test_central_projections_identity_center_traceless():
    inst = example_fixture("ex1")
    data = central_projections([ONE4], inst.p_set, inst.q_set)
    assert data.t_full.is_zero() and data.rank_full.rank == 0 and data.rank_restricted.rank == 0


def test_central_projections_restriction_is_prefix():
    inst = example_fixture("ex2a")
    data = central_projections(center_of_commutant(inst.generators), inst.p_set, inst.q_set)
    p = len(inst.p_set)
    assert {k: v for k, v in data.t_full.items() if k[1] < p} == dict(data.t_restricted.items())


def test_central_projections_shape_check():
    with pytest.raises(DimensionMismatch):
        central_projections([SparseMatrix.identity(2)], gens("X1"), [])


# --- decide -------------------------------------------------------------------------


def test_decide_example_one():
    r = decide(example_fixture("ex1"))
    assert r.verdict == "not_simulable"
    assert r.condition_a == "fails" and r.quadratic_dims == (4, 2)
    assert r.condition_b == "skipped" and r.linear_dims == (1, 1)
    assert "condition (A)" in r.failure_witness


def test_decide_example_two():
    a = decide(example_fixture("ex2a"))
    assert (a.verdict, a.condition_a, a.quadratic_dims) == ("not_simulable", "holds", (16, 16))
    assert (a.condition_b, a.projection_ranks, a.center_dim) == ("fails", (1, 2), 3)
    b = decide(example_fixture("ex2b"))
    assert b.verdict == "simulable" and b.projection_ranks == (1, 1)


def test_force_condition_b():
    r = decide(example_fixture("ex1"), force_condition_b=True)
    assert r.condition_b in ("holds", "fails") and r.verdict == "not_simulable"


def test_decide_empty_q_is_simulable():
    inst = ProblemInstance(4, example_fixture("ex1").p_set)
    r = decide(inst)
    assert r.simulable and r.quadratic_dims == (4, 4)


def test_decide_reports_arithmetic_mode():
    r = decide(example_fixture("ex2a"), mode="modular")
    assert r.monte_carlo and r.quadratic_ranks[0].method == "modular"
    assert r.verdict == "not_simulable"
    assert not decide(example_fixture("ex2a")).monte_carlo


def test_decide_non_traceless_generators():
    # a pure phase generator only adds a central u(1)
    p = gens("X1", "Y1", n=1)
    q = [SparseMatrix.identity(2).scale(i_)]
    r = decide(ProblemInstance(2, p, q))
    assert r.verdict == "not_simulable" and r.condition_a == "holds" and r.condition_b == "fails"


def test_decide_mutual():
    z = gens("Z1", n=1)
    assert decide_mutual(z, z).relation == "equal"
    ex1 = example_fixture("ex1")
    m = decide_mutual(ex1.p_set, ex1.q_set)
    assert m.relation != "equal" and not m.forward.simulable
    ex2b = example_fixture("ex2b")
    m = decide_mutual(ex2b.p_set, ex2b.q_set)
    assert m.relation == "p_strictly_larger"
    dims = lie_closure(ex2b.p_set).dim, lie_closure(ex2b.q_set).dim
    assert dims[0] > dims[1]


# --- invariants -----------------------------------------------------------------------


def test_quadratic_invariant_identity_and_swap(rng):
    rho = SparseMatrix.from_dense([[Fraction(2, 3), GaussianRational(Fraction(1, 5), 1)],
                                   [GaussianRational(Fraction(1, 5), -1), Fraction(1, 3)]])
    assert quadratic_invariant(rho, SparseMatrix.identity(4)) == 1
    assert quadratic_invariant(rho, swap_matrix(2)) == (rho @ rho).trace()


def test_quadratic_invariant_errors():
    with pytest.raises(NotUnitTrace):
        quadratic_invariant(SparseMatrix.identity(2), SparseMatrix.identity(4))
    with pytest.raises(DimensionMismatch):
        quadratic_invariant(SparseMatrix.diag([1, 0]), SparseMatrix.identity(3))


def test_quadratic_invariant_first_order_variation(rng):
    p = list(example_fixture("ex1").p_set)
    qs = quadratic_commutant(p).basis
    for _ in range(3):
        a = random_matrix(rng, 4)
        rho = a @ a.adjoint()
        rho = rho.scale(GaussianRational(1) / rho.trace())
        for h in p:
            drho = commutator(h, rho)
            var = kron(drho, rho) + kron(rho, drho)
            for s in qs:
                assert (var @ s).trace() == 0


def test_permutation_operator_swaps_factors():
    m = permutation_operator([1, 0], 2)
    assert m == swap_matrix(2)


KET00 = SparseMatrix.column([1, 0, 0, 0])
BELL = SparseMatrix.column([1, 0, 0, 1])


def test_concurrence_product_and_bell():
    assert concurrence_squared(KET00) == 0
    assert concurrence_squared(BELL, normalize=True) == 1
    half = Fraction(1, 2)
    # |psi> with rational amplitudes: (|00> + |01> + |10> - |11>)/2 is maximally entangled
    assert concurrence_squared(SparseMatrix.column([half, half, half, -half])) == 1


def test_concurrence_requires_normalization():
    with pytest.raises(NotNormalized):
        concurrence_squared(BELL)
    with pytest.raises(NotNormalized):
        concurrence_squared(SparseMatrix.column([0, 0, 0, 0]), normalize=True)
    with pytest.raises(DimensionMismatch):
        concurrence_squared(SparseMatrix.column([1, 0]))


def _signed_permutations():
    out = []
    for perm in ([[1, 0], [0, 1]], [[0, 1], [1, 0]]):
        for s0 in (1, -1, i_):
            for s1 in (1, -1, -i_):
                m = SparseMatrix.from_dense(perm)
                out.append(SparseMatrix.diag([s0, s1]) @ m)
    return out


def test_concurrence_local_invariance():
    rng = random.Random(7)
    local = _signed_permutations()
    states = [SparseMatrix.column([rng.randint(-2, 2) + rng.randint(-2, 2) * i_ for _ in range(4)])
              for _ in range(6)]
    states = [s for s in states if not s.is_zero()]
    for psi in states:
        base = concurrence_squared(psi, normalize=True)
        for _ in range(5):
            u = kron(rng.choice(local), rng.choice(local))
            assert concurrence_squared(u @ psi, normalize=True) == base


def test_random_instances_engine_runs():
    rng = random.Random(99)
    for _ in range(5):
        inst = random_pauli_instance(rng)
        r = decide(inst)
        assert (r.verdict == "simulable") == (r.condition_a == "holds" and r.condition_b == "holds")


def test_commutant_dimension_matches_basis():
    g = list(example_fixture("ex2a").p_set)
    assert commutant_dimension(g)[0] == commutant(g).dim == 3
