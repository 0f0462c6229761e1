"""Exact matrix mutation and the (B, C, G) matrix-pattern recurrences."""

from __future__ import annotations

import logging
from collections import deque
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from typing import Any

from sympy import ImmutableMatrix, Rational, diag, eye, gcd_list, lcm_list

from .errors import IndexOutOfRange, NotSkewSymmetrizable, ValidationError

logger = logging.getLogger(__name__)

MatrixLike = ImmutableMatrix | Sequence[Sequence[int]]
Vector = tuple[int, ...]


def as_int_matrix(value: MatrixLike, *, name: str = "matrix") -> ImmutableMatrix:
    """Coerce nested rows (or a sympy matrix) into a square integer ImmutableMatrix."""
    if isinstance(value, ImmutableMatrix):
        matrix = value
    else:
        rows = [list(row) for row in value]
        if not rows:
            raise ValidationError(f"{name} must be non-empty")
        if any(len(row) != len(rows) for row in rows):
            raise ValidationError(f"{name} must be square")
        matrix = ImmutableMatrix(rows)
    rows_, cols = matrix.shape
    if rows_ != cols or rows_ == 0:
        raise ValidationError(f"{name} must be a non-empty square matrix")
    if not all(entry.is_integer for entry in matrix):
        raise ValidationError(f"{name} must have integer entries")
    return matrix


def int_rows(matrix: ImmutableMatrix) -> list[list[int]]:
    return [[int(entry) for entry in row] for row in matrix.tolist()]


def column(matrix: ImmutableMatrix, j: int) -> Vector:
    """Column ``j`` (0-based) as a tuple of ints."""
    return tuple(int(entry) for entry in matrix.col(j))


def columns(matrix: ImmutableMatrix) -> list[Vector]:
    return [column(matrix, j) for j in range(matrix.shape[1])]


def from_columns(vectors: Sequence[Sequence[int]]) -> ImmutableMatrix:
    n = len(vectors)
    return ImmutableMatrix(n, n, lambda i, j: vectors[j][i])


def check_index(k: int, n: int) -> int:
    """Validate a 1-based mutation index and return its 0-based position."""
    if isinstance(k, bool) or not isinstance(k, int):
        raise IndexOutOfRange(f"mutation index must be an integer: {k!r}")
    if not 1 <= k <= n:
        raise IndexOutOfRange(f"mutation index {k} out of range 1..{n}")
    return k - 1


def _pos(x: int) -> int:
    return x if x > 0 else 0


def _sgn(x: int) -> int:
    return (x > 0) - (x < 0)


def skew_symmetrizer(matrix: MatrixLike) -> tuple[int, ...]:
    """Return the componentwise-minimal positive diagonal S with SB skew-symmetric.

    Weights are propagated along the nonzero pattern of B one connected
    component at a time, then each component is scaled to coprime integers.
    """
    rows = int_rows(as_int_matrix(matrix, name="B"))
    n = len(rows)
    for i in range(n):
        if rows[i][i] != 0:
            raise NotSkewSymmetrizable(f"diagonal entry b{i + 1}{i + 1} is nonzero")
        for j in range(i + 1, n):
            b_ij, b_ji = rows[i][j], rows[j][i]
            if (b_ij == 0) != (b_ji == 0):
                raise NotSkewSymmetrizable(f"b{i + 1}{j + 1} and b{j + 1}{i + 1} differ in support")
            if b_ij * b_ji > 0:
                raise NotSkewSymmetrizable(f"b{i + 1}{j + 1} and b{j + 1}{i + 1} have the same sign")

    weights: list[Rational | None] = [None] * n
    for root in range(n):
        if weights[root] is not None:
            continue
        weights[root] = Rational(1)
        component = [root]
        queue = deque([root])
        while queue:
            i = queue.popleft()
            s_i = weights[i]
            assert s_i is not None
            for j in range(n):
                if j == i or rows[i][j] == 0:
                    continue
                s_j = -s_i * Rational(rows[i][j], rows[j][i])
                if weights[j] is None:
                    weights[j] = s_j
                    component.append(j)
                    queue.append(j)
                elif weights[j] != s_j:
                    raise NotSkewSymmetrizable(f"inconsistent weights around index {j + 1}")
        scale = lcm_list([weights[i].q for i in component])  # type: ignore[union-attr]
        numerators = [weights[i] * scale for i in component]  # type: ignore[operator]
        common = gcd_list(numerators)
        for i, value in zip(component, numerators):
            weights[i] = value / common

    return tuple(int(w) for w in weights)  # type: ignore[arg-type]


def _mutate_rows(rows: list[list[int]], k: int) -> list[list[int]]:
    n = len(rows)
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i == k or j == k:
                out[i][j] = -rows[i][j]
            else:
                b_ik = rows[i][k]
                out[i][j] = rows[i][j] + _sgn(b_ik) * _pos(b_ik * rows[k][j])
    return out


@dataclass(frozen=True)
class ExchangeMatrix:
    """Skew-symmetrizable integer matrix B with its canonical skew-symmetrizer."""

    entries: ImmutableMatrix
    skew_symmetrizer: tuple[int, ...]

    @classmethod
    def from_rows(cls, rows: MatrixLike) -> ExchangeMatrix:
        matrix = as_int_matrix(rows, name="B")
        return cls(matrix, skew_symmetrizer(matrix))

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __getitem__(self, index: tuple[int, int]) -> int:
        return int(self.entries[index])

    def rows(self) -> list[list[int]]:
        return int_rows(self.entries)

    def mutate(self, k: int) -> ExchangeMatrix:
        return mutate_matrix(self, k)

    def permuted(self, order: Sequence[int]) -> ExchangeMatrix:
        """Simultaneously reorder rows and columns; ``order[i]`` is the old 0-based index."""
        rows = self.rows()
        n = self.n
        entries = ImmutableMatrix(n, n, lambda i, j: rows[order[i]][order[j]])
        return ExchangeMatrix(entries, tuple(self.skew_symmetrizer[i] for i in order))

    def s_inverse(self) -> ImmutableMatrix:
        return ImmutableMatrix(diag(*(Rational(1, s) for s in self.skew_symmetrizer)))

    def s_matrix(self) -> ImmutableMatrix:
        return ImmutableMatrix(diag(*self.skew_symmetrizer))


def mutate_matrix(b: ExchangeMatrix, k: int) -> ExchangeMatrix:
    """Mutate B at the 1-based index ``k``; the skew-symmetrizer is unchanged."""
    position = check_index(k, b.n)
    rows = _mutate_rows(b.rows(), position)
    return ExchangeMatrix(ImmutableMatrix(rows), b.skew_symmetrizer)


@dataclass(frozen=True)
class TruncationSpec:
    """Direction ``k`` (1-based) and sign for the truncated parts [εA]₊ in a base change."""

    k: int
    sign: int

    def __post_init__(self) -> None:
        if self.sign not in (1, -1):
            raise ValidationError(f"sign must be +1 or -1: {self.sign!r}")
        if isinstance(self.k, bool) or not isinstance(self.k, int) or self.k < 1:
            raise IndexOutOfRange(f"mutation index must be a positive integer: {self.k!r}")


@dataclass(frozen=True)
class MatrixSeed:
    """The triple (B_t, C_t, G_t) at a vertex reached from t0 by ``history``.

    ``history`` is bookkeeping only and takes no part in equality, so a seed
    compares equal to itself after any involutive detour.
    """

    b: ExchangeMatrix
    c: ImmutableMatrix
    g: ImmutableMatrix
    b0: ExchangeMatrix
    history: tuple[int, ...] = field(default=(), compare=False)

    @classmethod
    def initial(cls, b0: ExchangeMatrix) -> MatrixSeed:
        identity = ImmutableMatrix(eye(b0.n))
        return cls(b0, identity, identity, b0, ())

    @property
    def n(self) -> int:
        return self.b.n

    def mutate(self, k: int) -> MatrixSeed:
        return mutate_matrix_seed(self, k)

    def c_vectors(self) -> list[Vector]:
        return columns(self.c)

    def g_vectors(self) -> list[Vector]:
        return columns(self.g)

    def to_dict(self) -> dict[str, Any]:
        return {
            "b": self.b.rows(),
            "c": int_rows(self.c),
            "g": int_rows(self.g),
            "b0": self.b0.rows(),
            "history": list(self.history),
        }

    @classmethod
    def from_dict(cls, payload: dict[str, Any]) -> MatrixSeed:
        try:
            b0 = ExchangeMatrix.from_rows(payload["b0"])
            b = ExchangeMatrix(as_int_matrix(payload["b"], name="b"), b0.skew_symmetrizer)
            c = as_int_matrix(payload["c"], name="c")
            g = as_int_matrix(payload["g"], name="g")
            history = tuple(int(k) for k in payload.get("history", ()))
        except KeyError as exc:
            raise ValidationError(f"matrix seed is missing field {exc.args[0]!r}") from exc
        if not b.n == c.shape[0] == g.shape[0] == b0.n:
            raise ValidationError("matrix seed fields disagree in dimension")
        return cls(b, c, g, b0, history)


def mutate_matrix_seed(seed: MatrixSeed, k: int) -> MatrixSeed:
    """Apply the exchange relations of the matrix pattern at the 1-based index ``k``."""
    n = seed.n
    kk = check_index(k, n)
    b = seed.b.rows()
    c = int_rows(seed.c)
    g = int_rows(seed.g)
    b0 = seed.b0.rows()

    new_c = [row[:] for row in c]
    for i in range(n):
        c_ik = c[i][kk]
        for j in range(n):
            if j == kk:
                new_c[i][j] = -c[i][j]
            else:
                new_c[i][j] = c[i][j] + _sgn(c_ik) * _pos(c_ik * b[kk][j])

    new_g = [row[:] for row in g]
    for i in range(n):
        value = -g[i][kk]
        for j in range(n):
            value += g[i][j] * _pos(b[j][kk])
            value -= b0[i][j] * _pos(c[j][kk])
        new_g[i][kk] = value

    logger.debug("mutated seed %s at %d", seed.history, k)
    return MatrixSeed(
        b=ExchangeMatrix(ImmutableMatrix(_mutate_rows(b, kk)), seed.b.skew_symmetrizer),
        c=ImmutableMatrix(new_c),
        g=ImmutableMatrix(new_g),
        b0=seed.b0,
        history=(*seed.history, k),
    )


def apply_sequence(b0: ExchangeMatrix, seq: Sequence[int]) -> tuple[MatrixSeed, ...]:
    """Return the full trace ``(t0, μ_{k1}(t0), …)``; its length is ``len(seq) + 1``."""
    for k in seq:
        check_index(k, b0.n)
    trace = [MatrixSeed.initial(b0)]
    for k in seq:
        trace.append(trace[-1].mutate(k))
    return tuple(trace)


def seed_at(b0: ExchangeMatrix, seq: Sequence[int]) -> MatrixSeed:
    return apply_sequence(b0, seq)[-1]


def g_vector_of_monomial(g: ImmutableMatrix, v: Sequence[int]) -> Vector:
    """g-vector ``G_t·v`` of the cluster monomial with exponent vector ``v``."""
    n = g.shape[0]
    if len(v) != n:
        raise ValidationError(f"exponent vector has length {len(v)}, expected {n}")
    if any(x < 0 for x in v):
        raise ValidationError("cluster monomial exponents must be nonnegative")
    return tuple(int(x) for x in g * ImmutableMatrix(n, 1, list(v)))


def base_change_g(
    g_t0: ImmutableMatrix,
    b0: ExchangeMatrix,
    k: int,
    sign: int,
) -> ImmutableMatrix:
    """G-matrix of the same seed seen from the root adjacent to t0 along ``k``.

    Computes (J_k + [εB0]₊^{•k})·G + B0·[−εG]₊^{k•}.
    """
    spec = TruncationSpec(k, sign)
    n = b0.n
    kk = check_index(spec.k, n)
    g_rows = int_rows(as_int_matrix(g_t0, name="G"))
    if len(g_rows) != n:
        raise ValidationError("G and B0 differ in dimension")
    b = b0.rows()
    eps = spec.sign

    def left(i: int, j: int) -> int:
        base = (-1 if i == kk else 1) if i == j else 0
        return base + (_pos(eps * b[i][kk]) if j == kk else 0)

    def truncated(i: int, j: int) -> int:
        return _pos(-eps * g_rows[kk][j]) if i == kk else 0

    return ImmutableMatrix(n, n, left) * ImmutableMatrix(g_rows) + b0.entries * ImmutableMatrix(
        n, n, truncated
    )


@dataclass(frozen=True)
class SignCoherence:
    """Outcome of a sign-coherence check; ``index`` is 1-based on failure."""

    passed: bool
    axis: str
    index: int | None = None
    entries: Vector = ()

    def __bool__(self) -> bool:
        return self.passed


def check_sign_coherence(matrix: ImmutableMatrix, axis: str) -> SignCoherence:
    if axis not in {"rows", "columns"}:
        raise ValidationError(f"unknown axis: {axis}")
    lines = matrix.tolist() if axis == "rows" else matrix.T.tolist()
    for index, line in enumerate(lines, start=1):
        values = tuple(int(x) for x in line)
        if any(x > 0 for x in values) and any(x < 0 for x in values):
            return SignCoherence(False, axis, index, values)
    return SignCoherence(True, axis)


def check_duality(seed: MatrixSeed) -> bool:
    """Tropical duality S⁻¹·Gᵀ·S·C = I."""
    s = seed.b0.s_matrix()
    product = seed.b0.s_inverse() * seed.g.T * s * seed.c
    return product == ImmutableMatrix(eye(seed.n))


def is_unimodular(matrix: ImmutableMatrix) -> bool:
    return matrix.det() in (1, -1)


def enumerate_sequences(n: int, depth: int) -> Iterator[tuple[int, ...]]:
    """Reduced mutation sequences (no index repeated twice in a row) up to ``depth``."""
    frontier: list[tuple[int, ...]] = [()]
    yield ()
    for _ in range(depth):
        frontier = [(*seq, k) for seq in frontier for k in range(1, n + 1) if not seq or seq[-1] != k]
        yield from frontier


def reachable_seeds(b0: ExchangeMatrix, depth: int) -> Iterator[MatrixSeed]:
    """Every labeled seed along reduced sequences up to ``depth``, sharing prefixes."""
    stack: list[MatrixSeed] = [MatrixSeed.initial(b0)]
    while stack:
        seed = stack.pop()
        yield seed
        if len(seed.history) >= depth:
            continue
        for k in range(b0.n, 0, -1):
            if seed.history and seed.history[-1] == k:
                continue
            stack.append(seed.mutate(k))


def reduce_sequence(seq: Sequence[int]) -> tuple[int, ...]:
    """Cancel adjacent repeated indices, which mutate back and forth."""
    stack: list[int] = []
    for k in seq:
        if stack and stack[-1] == k:
            stack.pop()
        else:
            stack.append(k)
    return tuple(stack)
