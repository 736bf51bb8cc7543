from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symsim.errors import (
    BadArity,
    DimensionMismatch,
    EmptyGeneratorSet,
    IndexOutOfRange,
    NotSkewHermitian,
    ParseError,
    UnknownFixture,
)
from symsim.gaussian import GaussianRational
from symsim.instances import (
    ProblemInstance,
    central_spin_couplings,
    central_spin_instance,
    example_fixture,
)
from symsim.pauli import PauliPolynomial, PauliTerm, parse_pauli, realize, skewify
from symsim.sparse import SparseMatrix

DENSE = {
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]]),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def dense_string(nqubits, factors):
    out = np.array([[1]], dtype=complex)
    for q in range(1, nqubits + 1):
        out = np.kron(out, DENSE.get(factors.get(q), np.eye(2)))
    return out


@st.composite
def polynomials(draw, nqubits=None):
    n = draw(st.integers(1, 3)) if nqubits is None else nqubits
    terms = []
    for _ in range(draw(st.integers(0, 4))):
        qubits = draw(st.sets(st.integers(1, n), max_size=n))
        factors = {q: draw(st.sampled_from("XYZ")) for q in qubits}
        coeff = draw(st.fractions(-3, 3, max_denominator=5))
        terms.append(PauliTerm(tuple(factors.items()), coeff))
    return PauliPolynomial(n, terms)


# --- parser -----------------------------------------------------------------


def test_parse_example_two_drift():
    p = parse_pauli("2*Z1*Z2 - X1*X2 - Y1*Y2", 2)
    coeffs = {t.string(): t.coeff for t in p.terms}
    assert coeffs == {"Z1*Z2": 2, "X1*X2": -1, "Y1*Y2": -1}
    assert len(p.terms) == 3


def test_parse_single_factor():
    p = parse_pauli("X1", 2)
    assert len(p.terms) == 1 and p.terms[0].coeff == 1


@pytest.mark.parametrize("text", ["X3", "Z0", "X1*Y5"])
def test_parse_index_out_of_range(text):
    with pytest.raises(IndexOutOfRange):
        parse_pauli(text, 2)


@pytest.mark.parametrize(
    "text, pos",
    [
        ("", 0),
        ("X1 +", 4),
        ("X1 Y1", 3),
        ("X", 1),
        ("2*", 2),
        ("X1*X1", 3),
        ("1/0*X1", 2),
        ("W1", 0),
    ],
)
def test_parse_errors_have_positions(text, pos):
    with pytest.raises(ParseError) as info:
        parse_pauli(text, 2)
    assert info.value.position == pos
    assert info.value.expected


def test_parse_collects_terms_and_identity():
    p = parse_pauli("X1 + 1/2*X1 - 3 + Z2 - Z2", 2)
    assert str(p) == "-3 + 3/2*X1"
    assert parse_pauli("0*X1", 1).is_zero()
    assert str(parse_pauli("0*X1", 1)) == "0"


def test_whitespace_insignificant():
    assert parse_pauli(" 2 * Z 1 * Z2-X1 ", 2) == parse_pauli("2*Z1*Z2 - X1", 2)


@settings(max_examples=60, deadline=None)
@given(polynomials())
def test_print_parse_roundtrip(p):
    assert parse_pauli(str(p), p.nqubits) == p


def test_term_rejects_repeated_qubit():
    with pytest.raises(ValueError):
        PauliTerm(((1, "X"), (1, "Y")))


# --- realization --------------------------------------------------------------


def test_realize_z():
    assert realize(parse_pauli("Z1", 1)) == SparseMatrix.diag([1, -1])
    assert realize(parse_pauli("Z1*Z2", 2)) == SparseMatrix.diag([1, -1, -1, 1])


def test_skewify_x_and_zz():
    i = GaussianRational(0, 1)
    assert skewify(parse_pauli("X1", 1)) == SparseMatrix.from_dense([[0, i], [i, 0]])
    assert skewify(parse_pauli("Z1*Z2", 2)) == SparseMatrix.diag([i, -i, -i, i])


@settings(max_examples=40, deadline=None)
@given(polynomials())
def test_realize_matches_dense_oracle(p):
    # Pauli strings have integer real/imaginary parts, so the reference sum is exact
    d = 1 << p.nqubits
    re = np.zeros((d, d), dtype=object)
    im = np.zeros((d, d), dtype=object)
    for t in p.terms:
        s = dense_string(p.nqubits, dict(t.factors))
        re = re + t.coeff * s.real.astype(int).astype(object)
        im = im + t.coeff * s.imag.astype(int).astype(object)
    h = realize(p)
    for i in range(d):
        for j in range(d):
            assert (h[i, j].re, h[i, j].im) == (re[i, j], im[i, j])


@settings(max_examples=40, deadline=None)
@given(polynomials(nqubits=2), polynomials(nqubits=2), st.fractions(-2, 2, max_denominator=3))
def test_realize_linear(p, q, a):
    assert realize(p.scale(a) + q) == realize(p).scale(a) + realize(q)


@settings(max_examples=40, deadline=None)
@given(polynomials())
def test_hermitian_and_skew(p):
    h = realize(p)
    assert h.is_hermitian()
    assert skewify(p).adjoint() == -skewify(p)
    if all(t.factors for t in p.terms):
        assert h.trace() == 0


def test_qubit_one_is_leftmost():
    x1 = realize(parse_pauli("X1", 2)).to_complex()
    assert np.array_equal(x1, np.kron(DENSE["X"], np.eye(2)))


# --- instances ----------------------------------------------------------------


def test_problem_instance_validation():
    ix = skewify(parse_pauli("X1", 1))
    with pytest.raises(EmptyGeneratorSet):
        ProblemInstance(2, [], [ix])
    with pytest.raises(NotSkewHermitian):
        ProblemInstance(2, [realize(parse_pauli("X1", 1))])
    with pytest.raises(DimensionMismatch):
        ProblemInstance(4, [ix])
    inst = ProblemInstance(2, [ix])
    assert inst.q_set == () and inst.p_labels == ("P1",)


def test_central_spin_n2():
    inst = central_spin_instance(2, [1])
    drift = parse_pauli("X1 + X1*X2 + Y1*Y2 + Z1*Z2", 2)
    assert inst.p_set == (skewify(drift), skewify(parse_pauli("Z1", 2)))
    assert inst.q_set == (skewify(parse_pauli("X1", 2)),)
    assert inst.dim == 4


def test_central_spin_case_b_couplings():
    assert central_spin_couplings(3, "b") == [2, 1]
    assert central_spin_couplings(5, "b") == [2, 1, 2, 1]
    inst = central_spin_instance(3, [1, 2])
    assert inst.p_polys[0] == parse_pauli("X1 + X1*X2 + Y1*Y2 + Z1*Z2 + 2*X1*X3 + 2*Y1*Y3 + 2*Z1*Z3", 3)


@pytest.mark.parametrize("n, couplings", [(3, [1]), (2, [1, 1]), (1, [])])
def test_central_spin_arity(n, couplings):
    with pytest.raises(BadArity):
        central_spin_instance(n, couplings)


def test_central_spin_rational_couplings():
    inst = central_spin_instance(2, [Fraction(1, 3)])
    assert inst.p_polys[0].terms[-1].coeff == Fraction(1, 3)


def test_example_fixtures():
    ex1 = example_fixture("ex1")
    assert ex1.p_set == tuple(skewify(parse_pauli(s, 2)) for s in ("X1", "Y1", "X2", "Y2"))
    assert ex1.q_set == (skewify(parse_pauli("Z1*Z2", 2)),)
    ex2a = example_fixture("ex2a")
    assert ex2a.p_polys[0] == parse_pauli("2*Z1*Z2 - X1*X2 - Y1*Y2", 2)
    assert ex2a.q_polys[0] == parse_pauli("X1*X2 + Y1*Y2 + Z1*Z2", 2)
    ex2b = example_fixture("ex2b")
    assert ex2b.q_polys[0] == parse_pauli("X1*Z2 + Z1*X2 + Y1*Z2 + Z1*Y2", 2)


def test_unknown_fixture():
    with pytest.raises(UnknownFixture):
        example_fixture("ex9")
