"""Generator matrices and their exact triangular spectral decompositions.

All matrices in this module are 1-indexed n x n truncations of infinite
triangular matrices, stored as exact rationals.  Triangularity makes every
product of truncations equal the truncation of the product, so the
identities R L = I and R diag(D) L = generator hold exactly at any
truncation size.

Covered generators:

* block counting process of the Bolthausen-Sznitman coalescent
  (lower triangular, rates i / ((i-j)(i-j+1)), diagonal 1 - i),
* its fixation line (upper triangular, rates i / ((j-i)(j-i+1)),
  diagonal -i),
* the fixation line of the Kingman coalescent (pure birth with rate
  i (i+1) / 2).
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .combinatorics import factorial, stirling_first, stirling_second

__all__ = [
    "GeneratorKind",
    "TriangularMatrix",
    "SpectralDecomposition",
    "VerificationReport",
    "DegenerateSpectrumError",
    "generator_entry",
    "build_generator",
    "eigenvalues",
    "closed_form_decomposition",
    "recursive_decomposition",
    "verify_decomposition",
]


class GeneratorKind(enum.Enum):
    BS_BLOCK = "bs-block"
    BS_FIXATION = "bs-fixation"
    KINGMAN_FIXATION = "kingman-fixation"

    @property
    def orientation(self) -> str:
        return "lower" if self is GeneratorKind.BS_BLOCK else "upper"


class DegenerateSpectrumError(ValueError):
    """Raised when a recursion requires distinct eigenvalues but got repeats."""


@dataclass(frozen=True)
class TriangularMatrix:
    """Dense 1-indexed triangular matrix of exact rationals."""

    n: int
    orientation: str  # "upper" or "lower"
    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if self.orientation not in ("upper", "lower"):
            raise ValueError(f"orientation must be 'upper' or 'lower', got {self.orientation!r}")
        if len(self.rows) != self.n or any(len(r) != self.n for r in self.rows):
            raise ValueError("rows must form an n x n array")

    def entry(self, i: int, j: int) -> Fraction:
        """Entry at 1-based position (i, j)."""
        if not (1 <= i <= self.n and 1 <= j <= self.n):
            raise ValueError(f"index ({i}, {j}) outside 1..{self.n}")
        return self.rows[i - 1][j - 1]

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        return self.entry(*ij)

    def transpose(self) -> "TriangularMatrix":
        flipped = "upper" if self.orientation == "lower" else "lower"
        return TriangularMatrix(
            self.n, flipped, tuple(zip(*self.rows))
        )

    def matmul(self, other: "TriangularMatrix") -> "TriangularMatrix":
        if self.n != other.n:
            raise ValueError("size mismatch")
        n = self.n
        out = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            row = self.rows[i]
            for k in range(n):
                a = row[k]
                if a:
                    orow = other.rows[k]
                    oi = out[i]
                    for j in range(n):
                        if orow[j]:
                            oi[j] += a * orow[j]
        return TriangularMatrix(n, self.orientation, tuple(tuple(r) for r in out))

    def scale_columns(self, d: Sequence[Fraction]) -> "TriangularMatrix":
        """Right multiplication by diag(d)."""
        if len(d) != self.n:
            raise ValueError("size mismatch")
        return TriangularMatrix(
            self.n,
            self.orientation,
            tuple(tuple(v * d[j] for j, v in enumerate(row)) for row in self.rows),
        )

    def is_identity(self) -> bool:
        return all(
            v == (1 if i == j else 0)
            for i, row in enumerate(self.rows)
            for j, v in enumerate(row)
        )

    def to_jsonable(self) -> dict:
        """JSON-safe dict; rationals serialized as "num/den" strings."""
        return {
            "n": self.n,
            "orientation": self.orientation,
            "entries": [
                [f"{v.numerator}/{v.denominator}" for v in row] for row in self.rows
            ],
        }

    @classmethod
    def from_jsonable(cls, data: dict) -> "TriangularMatrix":
        rows = tuple(
            tuple(Fraction(s) for s in row) for row in data["entries"]
        )
        return cls(data["n"], data["orientation"], rows)

    def to_json(self) -> str:
        return json.dumps(self.to_jsonable())


@dataclass(frozen=True)
class SpectralDecomposition:
    kind: GeneratorKind
    n: int
    R: TriangularMatrix
    D: tuple[Fraction, ...]
    L: TriangularMatrix


@dataclass(frozen=True)
class VerificationReport:
    kind: GeneratorKind
    n: int
    rl_is_identity: bool
    rdl_is_generator: bool

    @property
    def ok(self) -> bool:
        return self.rl_is_identity and self.rdl_is_generator


def generator_entry(kind: GeneratorKind, i: int, j: int) -> Fraction:
    """Exact rate q(i, j) of the untruncated generator."""
    if i < 1 or j < 1:
        raise ValueError(f"states must be positive, got ({i}, {j})")
    if kind is GeneratorKind.BS_BLOCK:
        if j < i:
            return Fraction(i, (i - j) * (i - j + 1))
        if j == i:
            return Fraction(1 - i)
        return Fraction(0)
    if kind is GeneratorKind.BS_FIXATION:
        if j > i:
            return Fraction(i, (j - i) * (j - i + 1))
        if j == i:
            return Fraction(-i)
        return Fraction(0)
    # Kingman fixation line: pure birth at rate i (i+1) / 2.
    if j == i + 1:
        return Fraction(i * (i + 1), 2)
    if j == i:
        return Fraction(-i * (i + 1), 2)
    return Fraction(0)


def build_generator(kind: GeneratorKind, n: int) -> TriangularMatrix:
    """n x n truncation; diagonals keep their untruncated values.

    For the fixation kinds the truncation loses the upward mass beyond n,
    so row sums of the truncation are negative: that is intentional.
    """
    if n < 1:
        raise ValueError(f"truncation size must be positive, got {n}")
    rows = tuple(
        tuple(generator_entry(kind, i, j) for j in range(1, n + 1))
        for i in range(1, n + 1)
    )
    return TriangularMatrix(n, kind.orientation, rows)


def eigenvalues(kind: GeneratorKind, n: int) -> tuple[Fraction, ...]:
    """Generator diagonal, which is the spectrum of any truncation."""
    return tuple(generator_entry(kind, i, i) for i in range(1, n + 1))


def _closed_form_entry(kind: GeneratorKind, i: int, j: int, which: str) -> Fraction:
    sign = -1 if (i + j) % 2 else 1
    if kind is GeneratorKind.BS_FIXATION:
        if j < i:
            return Fraction(0)
        if which == "R":
            return Fraction(sign * factorial(i) * stirling_second(j, i), factorial(j))
        return Fraction(sign * factorial(i) * stirling_first(j, i), factorial(j))
    if kind is GeneratorKind.BS_BLOCK:
        if j > i:
            return Fraction(0)
        if which == "R":
            return Fraction(factorial(j - 1) * abs(stirling_first(i, j)), factorial(i - 1))
        return Fraction(sign * factorial(j - 1) * stirling_second(i, j), factorial(i - 1))
    # Kingman fixation line
    if j < i:
        return Fraction(0)
    if which == "R":
        num = factorial(j) * factorial(j - 1) * factorial(i + j)
        den = factorial(j - i) * factorial(i) * factorial(i - 1) * factorial(2 * j)
        return Fraction(((-1) ** (j - i)) * num, den)
    num = factorial(j) * factorial(j - 1) * factorial(2 * i + 1)
    den = factorial(i) * factorial(i - 1) * factorial(j - i) * factorial(i + j + 1)
    return Fraction(num, den)


def closed_form_decomposition(kind: GeneratorKind, n: int) -> SpectralDecomposition:
    """Exact R, D, L from the closed-form Stirling / factorial expressions.

    Eigenvalues are read off the generator diagonal: -i for the
    Bolthausen-Sznitman fixation line, 1 - i for its block counting
    process, -i (i+1) / 2 for the Kingman fixation line.
    """
    if n < 1:
        raise ValueError(f"truncation size must be positive, got {n}")
    orient = kind.orientation
    R = TriangularMatrix(
        n,
        orient,
        tuple(
            tuple(_closed_form_entry(kind, i, j, "R") for j in range(1, n + 1))
            for i in range(1, n + 1)
        ),
    )
    L = TriangularMatrix(
        n,
        orient,
        tuple(
            tuple(_closed_form_entry(kind, i, j, "L") for j in range(1, n + 1))
            for i in range(1, n + 1)
        ),
    )
    return SpectralDecomposition(kind, n, R, eigenvalues(kind, n), L)


def _recursive_upper(gen: TriangularMatrix, d: Sequence[Fraction]):
    n = gen.n
    g = gen.rows
    R = [[Fraction(0)] * n for _ in range(n)]
    L = [[Fraction(0)] * n for _ in range(n)]
    # Right eigenvectors, column by column, bottom up:
    # r_ij = sum_{k=i+1..j} g_ik r_kj / (d_j - d_i), r_jj = 1.
    for j in range(n):
        R[j][j] = Fraction(1)
        for i in range(j - 1, -1, -1):
            acc = sum((g[i][k] * R[k][j] for k in range(i + 1, j + 1)), Fraction(0))
            R[i][j] = acc / (d[j] - d[i])
    # Left eigenvectors, row by row, left to right:
    # l_ij = sum_{k=i..j-1} l_ik g_kj / (d_i - d_j), l_ii = 1.
    for i in range(n):
        L[i][i] = Fraction(1)
        for j in range(i + 1, n):
            acc = sum((L[i][k] * g[k][j] for k in range(i, j)), Fraction(0))
            L[i][j] = acc / (d[i] - d[j])
    return R, L


def recursive_decomposition(
    generator: TriangularMatrix,
    eigvals: Sequence[Fraction],
    kind: GeneratorKind | None = None,
) -> SpectralDecomposition:
    """R and L from the triangular eigenvector recursions, in exact rationals.

    Requires the eigenvalues (= generator diagonal) to be pairwise
    distinct; raises DegenerateSpectrumError otherwise.  For a lower
    triangular generator the recursion is run on the transpose and the
    factors are transposed back, which preserves the unit-diagonal
    normalization of both R and L.
    """
    n = generator.n
    d = tuple(Fraction(v) for v in eigvals)
    if len(d) != n:
        raise ValueError("eigenvalue count must match matrix size")
    if len(set(d)) != n:
        raise DegenerateSpectrumError("repeated eigenvalues; recursion is singular")
    for i in range(1, n + 1):
        if generator.entry(i, i) != d[i - 1]:
            raise ValueError("eigenvalues must equal the generator diagonal")
    if generator.orientation == "upper":
        R_rows, L_rows = _recursive_upper(generator, d)
        orient = "upper"
    else:
        Rt, Lt = _recursive_upper(generator.transpose(), d)
        # Q^T = R' D L'  =>  Q = (L')^T D (R')^T
        R_rows = [list(col) for col in zip(*Lt)]
        L_rows = [list(col) for col in zip(*Rt)]
        orient = "lower"
    R = TriangularMatrix(n, orient, tuple(tuple(r) for r in R_rows))
    L = TriangularMatrix(n, orient, tuple(tuple(r) for r in L_rows))
    if kind is None:
        kind = (
            GeneratorKind.BS_BLOCK if generator.orientation == "lower" else GeneratorKind.BS_FIXATION
        )
    return SpectralDecomposition(kind, n, R, d, L)


def verify_decomposition(dec: SpectralDecomposition) -> VerificationReport:
    """Exact booleans: R L = I and R diag(D) L = generator truncation."""
    rl = dec.R.matmul(dec.L)
    rdl = dec.R.scale_columns(dec.D).matmul(dec.L)
    gen = build_generator(dec.kind, dec.n)
    return VerificationReport(
        kind=dec.kind,
        n=dec.n,
        rl_is_identity=rl.is_identity(),
        rdl_is_generator=(rdl.rows == gen.rows),
    )
