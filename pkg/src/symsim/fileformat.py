"""Line-oriented instance files.

::

    # local controls against a ZZ coupling
    system: qubits 2
    P: X1; Y1; X2; Y2
    Q: Z1*Z2

Expressions are Hermitian Pauli polynomials (the engine works with ``i*H``).
With ``system: dim <d>`` the generators are instead written as exact
skew-Hermitian matrices, e.g. ``[[0, i], [i, 0]]``.  ``#`` starts a comment,
blank lines are ignored and the ``Q`` line is optional.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import IndexOutOfRange, ParseError, SymsimError
from .gaussian import parse_gaussian
from .instances import ProblemInstance
from .pauli import parse_pauli
from .sparse import SparseMatrix

__all__ = [
    "InstanceFile",
    "parse_instance_file",
    "parse_matrix_literal",
    "format_matrix_literal",
    "instance_file_for",
]

_KEY = re.compile(r"\s*([A-Za-z]+)\s*:")
_SYSTEM = re.compile(r"\s*(qubits|dim)\s+(\d+)\s*$")


@dataclass(frozen=True)
class InstanceFile:
    """Parsed file: ``mode`` is ``qubits`` or ``dim``; ``size`` is n or d.

    ``p_items``/``q_items`` hold :class:`PauliPolynomial` values in qubit
    mode and :class:`SparseMatrix` values in raw-matrix mode.
    """

    mode: str
    size: int
    p_items: tuple
    q_items: tuple = ()

    def __post_init__(self):
        if self.mode not in ("qubits", "dim"):
            raise ValueError(f"unknown system mode {self.mode!r}")
        object.__setattr__(self, "p_items", tuple(self.p_items))
        object.__setattr__(self, "q_items", tuple(self.q_items))

    @property
    def dim(self) -> int:
        return 1 << self.size if self.mode == "qubits" else self.size

    def to_instance(self) -> ProblemInstance:
        if self.mode == "qubits":
            return ProblemInstance.from_pauli(self.size, self.p_items, self.q_items)
        return ProblemInstance(self.size, self.p_items, self.q_items)

    def format(self) -> str:
        fmt = str if self.mode == "qubits" else format_matrix_literal
        lines = [f"system: {self.mode} {self.size}", "P: " + "; ".join(fmt(x) for x in self.p_items)]
        if self.q_items:
            lines.append("Q: " + "; ".join(fmt(x) for x in self.q_items))
        return "\n".join(lines) + "\n"


def instance_file_for(instance: ProblemInstance) -> InstanceFile:
    """File representation of an instance (Pauli form when available)."""
    if instance.nqubits is not None and len(instance.p_polys) == len(instance.p_set):
        return InstanceFile("qubits", instance.nqubits, instance.p_polys, instance.q_polys)
    return InstanceFile("dim", instance.dim, instance.p_set, instance.q_set)


# ---------------------------------------------------------------------------
# matrix literals


def format_matrix_literal(m: SparseMatrix) -> str:
    rows = ("[" + ", ".join(str(v) for v in row) + "]" for row in m.to_dense())
    return "[" + ", ".join(rows) + "]"


def parse_matrix_literal(text: str, dim: int | None = None) -> SparseMatrix:
    """Parse ``[[a, b], [c, d]]`` with Gaussian-rational entries.

    Errors carry the 0-based character offset into ``text``.
    """
    pos = 0
    n = len(text)

    def skip():
        nonlocal pos
        while pos < n and text[pos].isspace():
            pos += 1

    def expect(ch):
        nonlocal pos
        skip()
        if pos >= n or text[pos] != ch:
            raise ParseError("unexpected input in matrix literal", pos, [repr(ch)])
        pos += 1

    def entry():
        nonlocal pos
        skip()
        start = pos
        while pos < n and text[pos] not in ",]":
            pos += 1
        raw = text[start:pos].rstrip()
        try:
            return parse_gaussian(raw.replace(" ", ""))
        except ParseError as e:
            raise ParseError(e.message, start + (e.position or 0), e.expected) from None

    rows = []
    expect("[")
    while True:
        expect("[")
        row = [entry()]
        skip()
        while pos < n and text[pos] == ",":
            pos += 1
            row.append(entry())
            skip()
        expect("]")
        rows.append(row)
        skip()
        if pos < n and text[pos] == ",":
            pos += 1
            continue
        break
    expect("]")
    skip()
    if pos != n:
        raise ParseError("trailing characters after matrix", pos, ["end of item"])
    width = len(rows[0])
    if any(len(r) != width for r in rows) or width != len(rows):
        raise ParseError("matrix must be square with equal-length rows", 0, ["square matrix"])
    if dim is not None and width != dim:
        raise ParseError(f"matrix is {width}x{width}, system has dim {dim}", 0, [f"{dim}x{dim} matrix"])
    return SparseMatrix.from_dense(rows)


# ---------------------------------------------------------------------------
# files


def _split_items(body: str, offset: int):
    """``(text, column offset)`` for every ``;``-separated item."""
    items = []
    start = 0
    for part in body.split(";"):
        lead = len(part) - len(part.lstrip())
        items.append((part.strip(), offset + start + lead))
        start += len(part) + 1
    return items


def parse_instance_file(text: str) -> InstanceFile:
    """Parse an instance file; every error is a :class:`ParseError` with line/column."""
    mode = size = None
    seen = {}
    p_items, q_items = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        m = _KEY.match(line)
        if not m:
            col = len(line) - len(line.lstrip()) + 1
            raise ParseError("expected 'system:', 'P:' or 'Q:'", None, ["key"], lineno, col)
        key = m.group(1)
        body = line[m.end():]
        if key not in ("system", "P", "Q"):
            raise ParseError(f"unknown key {key!r}", None, ["system", "P", "Q"], lineno, m.start(1) + 1)
        if key in seen:
            raise ParseError(f"duplicate {key!r} line (first on line {seen[key]})", None, (), lineno, m.start(1) + 1)
        seen[key] = lineno
        if key == "system":
            sm = _SYSTEM.match(body)
            if not sm:
                raise ParseError("malformed system line", None, ["qubits <n>", "dim <d>"], lineno, m.end() + 1)
            mode, size = sm.group(1), int(sm.group(2))
            if size < 1:
                raise ParseError("system size must be positive", None, (), lineno, m.end() + sm.start(2) + 1)
            continue
        if mode is None:
            raise ParseError(f"'{key}:' before 'system:'", None, ["system"], lineno, 1)
        items = []
        for item, col in _split_items(body, m.end()):
            if not item:
                if body.strip():
                    raise ParseError("empty item", None, ["expression"], lineno, col + 1)
                continue
            items.append(_parse_item(item, mode, size, lineno, col))
        if key == "P":
            if not items:
                raise ParseError("P must list at least one generator", None, ["expression"], lineno, m.end() + 1)
            p_items = items
        else:
            q_items = items
    if mode is None:
        raise ParseError("missing 'system:' line", None, ["system"], 1, 1)
    if "P" not in seen:
        raise ParseError("missing 'P:' line", None, ["P"], max(seen.values()), 1)
    return InstanceFile(mode, size, p_items, q_items)


def _parse_item(item: str, mode: str, size: int, lineno: int, col: int):
    try:
        if mode == "qubits":
            return parse_pauli(item, size)
        mat = parse_matrix_literal(item, size)
        if not mat.is_skew_hermitian():
            raise ParseError("matrix is not skew-Hermitian", 0, ["A^dagger = -A"])
        return mat
    except ParseError as e:
        raise e.at_line(lineno, col) from None
    except IndexOutOfRange as e:
        raise ParseError(str(e), None, (), lineno, col + 1) from None
    except SymsimError as e:  # pragma: no cover - defensive
        raise ParseError(str(e), None, (), lineno, col + 1) from None

