"""Exact-rational exponent tuples and their interpolation.

A tuple ``(q_1, ..., q_n)`` with every ``q_i`` in ``[1, 2]`` carries the
defect ``(n+1)/2 - sum(1/q_i)``. Tuples with zero defect are the extremal
(Bohnenblust--Hille) exponents that every bound engine in this package works
with; positive-defect tuples can be built and inspected but not bounded.

Interpolating tuples ``alpha_1, ..., alpha_j`` with weights ``theta`` produces
the tuple ``r`` given coordinatewise by ``1/r_i = sum_j theta_j / alpha_ji``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import BadPositions, EntryOutOfRange, Infeasible, LengthMismatch
from .lp import lexmin_feasible

Rational = Fraction

ONE = Fraction(1)
TWO = Fraction(2)
HALF = Fraction(1, 2)


class ScalarField(str, enum.Enum):
    REAL = "real"
    COMPLEX = "complex"

    @classmethod
    def parse(cls, value: "str | ScalarField") -> "ScalarField":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise ValueError(f"unknown scalar field {value!r}; expected 'real' or 'complex'") from None


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not text:
        raise ValueError("empty exponent entry")
    return Fraction(text)


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class ExponentTuple:
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        entries = tuple(Fraction(q) for q in self.entries)
        if not entries:
            raise EntryOutOfRange("an exponent tuple needs at least one entry")
        for i, q in enumerate(entries, 1):
            if not ONE <= q <= TWO:
                raise EntryOutOfRange(f"entry {i} = {format_rational(q)} is outside [1, 2]")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def parse(cls, text: str) -> "ExponentTuple":
        """Parse ``"5/3, 5/3, 5/3"``; integers are accepted as shorthand."""
        return cls(tuple(parse_rational(part) for part in text.replace(" ", "").split(",")))

    def __str__(self) -> str:
        return ",".join(format_rational(q) for q in self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def reciprocals(self) -> tuple[Fraction, ...]:
        return tuple(1 / q for q in self.entries)

    @property
    def defect(self) -> Fraction:
        return Fraction(self.n + 1, 2) - sum(self.reciprocals)

    @property
    def is_bohnenblust_hille(self) -> bool:
        return self.defect == 0

    @property
    def is_admissible(self) -> bool:
        return self.defect >= 0

    def permuted(self, perm: Sequence[int]) -> "ExponentTuple":
        """Tuple whose i-th entry is ``self[perm[i]]`` (0-based indices)."""
        if sorted(perm) != list(range(self.n)):
            raise BadPositions(f"{list(perm)} is not a permutation of 0..{self.n - 1}")
        return ExponentTuple(tuple(self.entries[p] for p in perm))


@dataclass(frozen=True)
class WeightVector:
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        ws = tuple(Fraction(w) for w in self.weights)
        if not ws:
            raise LengthMismatch("a weight vector needs at least one weight")
        if any(w < 0 for w in ws):
            raise ValueError("interpolation weights must be nonnegative")
        if sum(ws) != 1:
            raise ValueError(f"interpolation weights sum to {sum(ws)}, not 1")
        object.__setattr__(self, "weights", ws)

    def __len__(self) -> int:
        return len(self.weights)

    def __iter__(self):
        return iter(self.weights)

    def __getitem__(self, i):
        return self.weights[i]

    def __str__(self) -> str:
        return ",".join(format_rational(w) for w in self.weights)


def make_tuple(qs: Iterable) -> ExponentTuple:
    return ExponentTuple(tuple(qs))


def classical_tuple(n: int) -> ExponentTuple:
    if n < 1:
        raise BadPositions("classical tuple needs n >= 1")
    return ExponentTuple((Fraction(2 * n, n + 1),) * n)


def block_exponent(k: int) -> Fraction:
    """The exponent ``2k/(k+1)`` used on the k distinguished coordinates."""
    return Fraction(2 * k, k + 1)


def prop21_tuple(n: int, k: int, positions: Iterable[int]) -> ExponentTuple:
    """Tuple with ``2k/(k+1)`` at the given 1-based positions and 2 elsewhere."""
    if not 1 <= k <= n:
        raise BadPositions(f"need 1 <= k <= n, got k={k}, n={n}")
    pos = list(positions)
    if len(set(pos)) != len(pos) or len(pos) != k:
        raise BadPositions(f"expected {k} distinct positions, got {pos}")
    if any(not isinstance(p, int) or not 1 <= p <= n for p in pos):
        raise BadPositions(f"positions {pos} are not all in 1..{n}")
    q = block_exponent(k)
    chosen = set(pos)
    return ExponentTuple(tuple(q if i in chosen else TWO for i in range(1, n + 1)))


def block_shape(t: ExponentTuple) -> tuple[int, tuple[int, ...]] | None:
    """Recover ``(k, positions)`` if ``t`` has the k-block shape, else None."""
    pos = tuple(i for i, q in enumerate(t.entries, 1) if q != TWO)
    if not pos:
        return None
    k = len(pos)
    q = block_exponent(k)
    if any(t.entries[i - 1] != q for i in pos):
        return None
    return k, pos


def _check_lengths(tuples: Sequence[ExponentTuple], n: int | None = None) -> int:
    if not tuples:
        raise LengthMismatch("need at least one tuple")
    n = tuples[0].n if n is None else n
    for t in tuples:
        if t.n != n:
            raise LengthMismatch(f"tuple {t} has length {t.n}, expected {n}")
    return n


def interpolate(tuples: Sequence[ExponentTuple], weights: WeightVector) -> ExponentTuple:
    n = _check_lengths(tuples)
    if len(weights) != len(tuples):
        raise LengthMismatch(f"{len(weights)} weights for {len(tuples)} tuples")
    recips = [
        sum((w / t.entries[i] for t, w in zip(tuples, weights)), Fraction(0))
        for i in range(n)
    ]
    return ExponentTuple(tuple(1 / r for r in recips))


def weight_system(
    target: ExponentTuple, generators: Sequence[ExponentTuple]
) -> tuple[list[list[Fraction]], list[Fraction]]:
    """Rows ``sum_j theta_j/alpha_ji = 1/q_i`` followed by ``sum_j theta_j = 1``."""
    n = _check_lengths(generators, target.n)
    A = [[1 / g.entries[i] for g in generators] for i in range(n)]
    b = list(target.reciprocals)
    A.append([ONE] * len(generators))
    b.append(ONE)
    return A, b


def solve_weights(target: ExponentTuple, generators: Sequence[ExponentTuple]) -> WeightVector:
    """Exact weights interpolating ``generators`` into ``target``.

    When several weight vectors work, the lexicographically smallest vertex
    of the solution polytope is returned. Raises :class:`Infeasible` when no
    nonnegative solution exists.
    """
    A, b = weight_system(target, generators)
    try:
        theta = lexmin_feasible(A, b)
    except Infeasible:
        raise Infeasible(f"{target} is not an interpolation of the given generators") from None
    return WeightVector(theta)
