"""Pauli-string Hamiltonians: expression language, canonical form and matrices.

Grammar (whitespace is insignificant)::

    expr   := term (("+" | "-") term)*
    term   := [coeff "*"] factor ("*" factor)* | coeff
    factor := ("X" | "Y" | "Z") integer
    coeff  := rational such as 2, -1/3

Qubit indices are 1-based; qubit 1 is the leftmost Kronecker factor.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import IndexOutOfRange, ParseError
from .gaussian import GaussianRational
from .sparse import SparseMatrix

__all__ = [
    "PauliTerm",
    "PauliPolynomial",
    "parse_pauli",
    "realize",
    "skewify",
    "pauli_string_matrix",
]

_LETTERS = "XYZ"


@dataclass(frozen=True)
class PauliTerm:
    """``coeff`` times a product of single-qubit Paulis.

    ``factors`` is a tuple of ``(qubit, letter)`` pairs sorted by qubit; the
    empty tuple stands for the identity.
    """

    factors: tuple = ()
    coeff: Fraction = Fraction(1)

    def __post_init__(self):
        raw = self.factors.items() if isinstance(self.factors, dict) else self.factors
        factors = tuple(sorted((int(q), str(p)) for q, p in raw))
        qubits = [q for q, _ in factors]
        if len(set(qubits)) != len(qubits):
            raise ValueError(f"qubit repeated in term {factors}")
        for q, p in factors:
            if p not in _LETTERS:
                raise ValueError(f"unknown Pauli letter {p!r}")
            if q < 1:
                raise IndexOutOfRange(f"qubit index {q} must be >= 1")
        object.__setattr__(self, "factors", factors)
        object.__setattr__(self, "coeff", Fraction(self.coeff))

    @property
    def signature(self):
        return self.factors

    def string(self) -> str:
        return "*".join(f"{p}{q}" for q, p in self.factors)


class PauliPolynomial:
    """Real-coefficient sum of Pauli strings on ``nqubits`` qubits (canonical)."""

    __slots__ = ("nqubits", "terms")

    def __init__(self, nqubits: int, terms: Iterable[PauliTerm] = ()):
        if nqubits < 1:
            raise ValueError("need at least one qubit")
        acc: dict[tuple, Fraction] = {}
        for t in terms:
            for q, _ in t.factors:
                if q > nqubits:
                    raise IndexOutOfRange(f"qubit index {q} exceeds {nqubits}")
            acc[t.factors] = acc.get(t.factors, Fraction(0)) + t.coeff
        self.nqubits = nqubits
        self.terms = tuple(PauliTerm(sig, c) for sig, c in sorted(acc.items()) if c)

    @classmethod
    def from_factors(cls, nqubits: int, factors: dict, coeff=1) -> "PauliPolynomial":
        return cls(nqubits, [PauliTerm(tuple(factors.items()), Fraction(coeff))])

    def __add__(self, other):
        if not isinstance(other, PauliPolynomial):
            return NotImplemented
        return PauliPolynomial(max(self.nqubits, other.nqubits), self.terms + other.terms)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        if not isinstance(other, PauliPolynomial):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> "PauliPolynomial":
        c = Fraction(c)
        return PauliPolynomial(self.nqubits, [PauliTerm(t.factors, t.coeff * c) for t in self.terms])

    def __mul__(self, c):
        if isinstance(c, PauliPolynomial):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, PauliPolynomial):
            return NotImplemented
        return self.nqubits == other.nqubits and [(t.factors, t.coeff) for t in self.terms] == [
            (t.factors, t.coeff) for t in other.terms
        ]

    def __hash__(self):
        return hash((self.nqubits, tuple((t.factors, t.coeff) for t in self.terms)))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for k, t in enumerate(self.terms):
            c = t.coeff
            body = t.string()
            if k == 0:
                if not body:
                    parts.append(str(c))
                elif c == 1:
                    parts.append(body)
                else:
                    parts.append(f"{c}*{body}")
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not body:
                parts.append(f"{sign} {a}")
            elif a == 1:
                parts.append(f"{sign} {body}")
            else:
                parts.append(f"{sign} {a}*{body}")
        return " ".join(parts)

    def __repr__(self):
        return f"PauliPolynomial({self.nqubits}, {str(self)!r})"


# ---------------------------------------------------------------------------
# parser


class _Parser:
    def __init__(self, text: str, nqubits: int):
        self.text = text
        self.n = len(text)
        self.pos = 0
        self.nqubits = nqubits

    def skip(self):
        while self.pos < self.n and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < self.n else ""

    def error(self, msg, expected):
        raise ParseError(msg, self.pos, expected)

    def digits(self):
        start = self.pos
        while self.pos < self.n and self.text[self.pos].isdigit():
            self.pos += 1
        return self.text[start:self.pos]

    def coeff(self, signed=True):
        self.skip()
        start = self.pos
        sign = 1
        if signed and self.pos < self.n and self.text[self.pos] in "+-":
            sign = -1 if self.text[self.pos] == "-" else 1
            self.pos += 1
            self.skip()
        num = self.digits()
        if not num:
            self.pos = start
            return None
        value = Fraction(int(num))
        self.skip()
        if self.pos < self.n and self.text[self.pos] == "/":
            self.pos += 1
            self.skip()
            den = self.digits()
            if not den:
                self.error("missing denominator", ["integer"])
            if int(den) == 0:
                self.pos -= len(den)
                self.error("zero denominator", ["nonzero integer"])
            value /= int(den)
        return sign * value

    def factor(self):
        c = self.peek()
        if c not in _LETTERS or not c:
            self.error("expected a Pauli factor", ["X", "Y", "Z"])
        letter_pos = self.pos
        self.pos += 1
        self.skip()
        if self.pos >= self.n or not self.text[self.pos].isdigit():
            self.error("expected qubit index after Pauli letter", ["integer"])
        idx_pos = self.pos
        q = int(self.digits())
        if q == 0 or q > self.nqubits:
            raise IndexOutOfRange(
                f"qubit index {q} at position {idx_pos} outside 1..{self.nqubits}"
            )
        return letter_pos, q, c

    def term(self):
        start = self.pos
        coeff = self.coeff()
        factors = {}
        if coeff is not None:
            if self.peek() != "*":
                return PauliTerm((), coeff)
            self.pos += 1
        else:
            coeff = Fraction(1)
        while True:
            fpos, q, letter = self.factor()
            if q in factors:
                self.pos = fpos
                self.error(f"qubit {q} appears twice in one term", ["distinct qubit index"])
            factors[q] = letter
            if self.peek() == "*":
                self.pos += 1
                continue
            break
        if self.pos == start:  # pragma: no cover - defensive
            self.error("empty term", ["term"])
        return PauliTerm(tuple(factors.items()), coeff)

    def expr(self):
        if not self.peek():
            self.error("empty expression", ["coefficient", "X", "Y", "Z"])
        terms = [self.term()]
        while True:
            c = self.peek()
            if not c:
                break
            if c not in "+-":
                self.error("unexpected character", ["+", "-", "*", "end of input"])
            sign = -1 if c == "-" else 1
            self.pos += 1
            if not self.peek():
                self.error("dangling operator", ["term"])
            t = self.term()
            terms.append(PauliTerm(t.factors, sign * t.coeff))
        return terms


def parse_pauli(text: str, nqubits: int) -> PauliPolynomial:
    """Parse a Pauli expression into canonical form.

    >>> str(parse_pauli("2*Z1*Z2 - X1*X2 - Y1*Y2", 2))
    '-1*X1*X2 - Y1*Y2 + 2*Z1*Z2'
    """
    return PauliPolynomial(nqubits, _Parser(text, nqubits).expr())


# ---------------------------------------------------------------------------
# matrices

# action on basis state |bit>: letter -> (flip, phase for bit 0, phase for bit 1)
_ACTION = {
    "X": (1, (1, 0), (1, 0)),
    "Y": (1, (0, 1), (0, -1)),
    "Z": (0, (1, 0), (-1, 0)),
}


def _cmul(x, y):
    return (x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0])


def _string_entries(nqubits: int, factors) -> dict:
    """``{(row, col): (re, im)}`` of a Pauli string as a Gaussian-integer map."""
    flip = 0
    ops = []
    for q, p in factors:
        shift = nqubits - q
        f, ph0, ph1 = _ACTION[p]
        if f:
            flip |= 1 << shift
        ops.append((shift, ph0, ph1))
    out = {}
    for col in range(1 << nqubits):
        ph = (1, 0)
        for shift, ph0, ph1 in ops:
            ph = _cmul(ph, ph1 if (col >> shift) & 1 else ph0)
        out[(col ^ flip, col)] = ph
    return out


def pauli_string_matrix(nqubits: int, factors) -> SparseMatrix:
    e = _string_entries(nqubits, factors)
    return SparseMatrix._trusted(
        1 << nqubits, 1 << nqubits, {k: GaussianRational(a, b) for k, (a, b) in e.items()}
    )


def _realize(p: PauliPolynomial, phase) -> SparseMatrix:
    acc: dict = {}
    for t in p.terms:
        for k, ph in _string_entries(p.nqubits, t.factors).items():
            ph = _cmul(ph, phase)
            a, b = acc.get(k, (0, 0))
            acc[k] = (a + t.coeff * ph[0], b + t.coeff * ph[1])
    d = 1 << p.nqubits
    return SparseMatrix._trusted(
        d, d, {k: GaussianRational(a, b) for k, (a, b) in acc.items() if a or b}
    )


def realize(p: PauliPolynomial) -> SparseMatrix:
    """Hermitian ``2**n x 2**n`` matrix of ``p``."""
    return _realize(p, (1, 0))


def skewify(p: PauliPolynomial) -> SparseMatrix:
    """The generator ``i * realize(p)``."""
    return _realize(p, (0, 1))
