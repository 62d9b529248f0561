"""Best decomposition of an exponent tuple over a family of block generators.

Every generator is a k-block tuple whose constant is known from
:mod:`bhbounds.recurrence`. If ``target`` interpolates generators ``alpha_j``
with weights ``theta_j``, its constant is at most ``prod_j C_j^theta_j``.
Taking logs turns the search for the best weights into the linear program

    minimise   sum_j theta_j ln C_j
    subject to sum_j theta_j / alpha_ji = 1/q_i,   sum_j theta_j = 1,   theta >= 0

solved here with exact rational pivoting; the objective uses the upper
endpoints of the ``ln C_j`` enclosures.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .certificate import BoundCertificate, Evaluator, Interp, Leaf
from .errors import CapTooSmall, DimensionMismatch, FamilyError, LengthMismatch, NotBohnenblustHille
from .exponents import ExponentTuple, ScalarField, WeightVector, block_shape, weight_system
from .intervals import DEFAULT_PRECISION, BoundInterval
from .lp import solve_lp
from .recurrence import ConstantTable, get_table

DEFAULT_CAP = 256


@dataclass(frozen=True)
class Generator:
    tuple: ExponentTuple
    constant: BoundInterval
    leaf: Leaf


@dataclass(frozen=True, eq=False)
class GeneratorFamily:
    members: tuple[Generator, ...]
    field: ScalarField
    precision_bits: int

    def __post_init__(self):
        if not self.members:
            raise FamilyError("a generator family needs at least one member")
        n = self.members[0].tuple.n
        for g in self.members:
            if g.tuple.n != n:
                raise DimensionMismatch("family members have different lengths")
            if not g.tuple.is_bohnenblust_hille:
                raise FamilyError(f"family member {g.tuple} has nonzero defect")
            if g.constant.hi_fraction < 1:
                raise FamilyError(f"family member {g.tuple} has a constant below 1")

    @property
    def n(self) -> int:
        return self.members[0].tuple.n

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    @property
    def tuples(self) -> tuple[ExponentTuple, ...]:
        return tuple(g.tuple for g in self.members)

    def permuted(self, perm: Sequence[int]) -> "GeneratorFamily":
        """Family with every member's coordinates permuted by ``perm``."""
        table = get_table(self.field, self.precision_bits)
        return family_from_tuples([g.tuple.permuted(perm) for g in self.members],
                                  self.field, self.precision_bits, table)


def _window_positions(n: int, cap: int) -> list[tuple[int, ...]]:
    windows = {k: [tuple(range(s, s + k)) for s in range(1, n - k + 2)] for k in range(1, n + 1)}
    picked: list[tuple[int, ...]] = []
    depth = 0
    while len(picked) < cap:
        added = False
        for k in range(1, n + 1):
            if depth < len(windows[k]) and len(picked) < cap:
                picked.append(windows[k][depth])
                added = True
        if not added:
            break
        depth += 1
    return sorted(picked, key=lambda pos: (len(pos), pos))


def default_positions(n: int, cap: int = DEFAULT_CAP) -> list[tuple[int, ...]]:
    """Position sets of the default family: all subsets if ``2^n - 1 <= cap``,
    otherwise contiguous windows, taken round-robin over k until ``cap``."""
    if n < 1:
        raise FamilyError("n must be >= 1")
    if cap < n:
        raise CapTooSmall(f"cap {cap} cannot hold one generator for each k = 1..{n}")
    if 2 ** n - 1 <= cap:
        return [pos for k in range(1, n + 1) for pos in combinations(range(1, n + 1), k)]
    return _window_positions(n, cap)


def _member(table: ConstantTable, k: int, n: int, positions: tuple[int, ...]) -> Generator:
    leaf = table.leaf(k, n, positions)
    return Generator(leaf.tuple, table.evaluator.value(leaf), leaf)


def default_family(n: int, field, cap: int = DEFAULT_CAP,
                   precision_bits: int = DEFAULT_PRECISION) -> GeneratorFamily:
    table = get_table(field, precision_bits)
    members = [_member(table, len(pos), n, pos) for pos in default_positions(n, cap)]
    return GeneratorFamily(tuple(members), table.field, precision_bits)


def family_from_tuples(tuples: Iterable[ExponentTuple], field,
                       precision_bits: int = DEFAULT_PRECISION,
                       table: ConstantTable | None = None) -> GeneratorFamily:
    """Family from explicit k-block tuples (e.g. read from a family file)."""
    table = table or get_table(field, precision_bits)
    members = []
    for t in tuples:
        shape = block_shape(t)
        if shape is None:
            raise FamilyError(f"{t} is not a k-block tuple (2k/(k+1) on k coordinates, 2 elsewhere)")
        k, pos = shape
        members.append(_member(table, k, t.n, pos))
    return GeneratorFamily(tuple(members), table.field, precision_bits)


@dataclass(frozen=True)
class Decomposition:
    certificate: BoundCertificate
    weights: WeightVector
    objective: Fraction


def _log_costs(family: GeneratorFamily, ev: Evaluator) -> list[Fraction]:
    return [ev.log_value(g.leaf).hi_fraction for g in family]


def solve_decomposition(target: ExponentTuple, family: GeneratorFamily,
                        precision_bits: int | None = None) -> Decomposition:
    """Optimal weights and certificate; see :func:`optimize_decomposition`."""
    if target.n != family.n:
        raise DimensionMismatch(f"target has length {target.n}, family has length {family.n}")
    if not target.is_bohnenblust_hille:
        raise NotBohnenblustHille(f"{target} has defect {target.defect}; bounds need defect 0")
    prec = precision_bits or family.precision_bits
    table = get_table(family.field, prec)
    ev = table.evaluator
    A, b = weight_system(target, family.tuples)
    sol = solve_lp(_log_costs(family, ev), A, b)
    weights = WeightVector(sol.x)
    support = [j for j, w in enumerate(sol.x) if w]
    node = Interp(tuple(family.members[j].leaf for j in support),
                  WeightVector(tuple(sol.x[j] for j in support)))
    cert = BoundCertificate(target, family.field, ev.value(node), node, family.tuples)
    return Decomposition(cert, weights, sol.value)


def optimize_decomposition(target: ExponentTuple, family: GeneratorFamily,
                           precision_bits: int | None = None) -> BoundCertificate:
    """Certified bound for ``target`` from the best interpolation of ``family``.

    Raises :class:`~bhbounds.errors.Infeasible` if ``target`` is not in the
    convex hull (in reciprocal coordinates) of the family.
    """
    return solve_decomposition(target, family, precision_bits).certificate


def constant_of_weights(family: GeneratorFamily, weights: WeightVector) -> BoundInterval:
    """``prod_j C_j^theta_j`` with outward rounding."""
    if len(weights) != len(family):
        raise LengthMismatch(f"{len(weights)} weights for a family of {len(family)}")
    ev = get_table(family.field, family.precision_bits).evaluator
    return ev.value(Interp(tuple(g.leaf for g in family), weights))
