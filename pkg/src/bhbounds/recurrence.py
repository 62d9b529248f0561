"""Upper bounds for the classical constants ``C_m`` by split interpolation.

For ``m = a + b`` the two block tuples

    L = (2a/(a+1) x a, 2 x b)      with constant  C_a * A_{2a/(a+1)}^{-b}
    R = (2 x a, 2b/(b+1) x b)      with constant  C_b * A_{2b/(b+1)}^{-a}

interpolate to ``classical_tuple(m)`` with weights ``(a/m, b/m)``, so

    C_m <= (C_a A_{2a/(a+1)}^{-b})^(a/m) * (C_b A_{2b/(b+1)}^{-a})^(b/m).

``a = b = n`` is the doubling step and ``(n, n+1)`` the odd step of the
classical complex recurrence; for real scalars the minimum over every split
is taken (``C_26`` for instance prefers ``12 + 14`` over ``13 + 13``).
"""

from __future__ import annotations

import threading
from fractions import Fraction

from mpmath import libmp

from .certificate import BoundCertificate, Evaluator, Leaf, Split
from .errors import BadArguments, ReplayMismatch
from .exponents import (
    ExponentTuple,
    ScalarField,
    WeightVector,
    block_exponent,
    classical_tuple,
    interpolate,
    prop21_tuple,
)
from .intervals import DEFAULT_PRECISION, BoundInterval


def split_weights(a: int, b: int) -> WeightVector:
    """Weights interpolating the two block tuples of a split into ``classical_tuple(a+b)``.

    Solved from the first coordinate of each block, then checked exactly
    against the whole tuple.
    """
    if a < 1 or b < 1:
        raise BadArguments(f"split parts must be positive, got ({a}, {b})")
    m = a + b
    target = classical_tuple(m)
    qa = block_exponent(a)
    # left block coordinate: 1/q = t/qa + (1 - t)/2
    t = (1 / target[0] - Fraction(1, 2)) / (1 / qa - Fraction(1, 2))
    weights = WeightVector((t, 1 - t))
    left = prop21_tuple(m, a, range(1, a + 1))
    right = prop21_tuple(m, b, range(a + 1, m + 1))
    if interpolate([left, right], weights) != target:
        raise ReplayMismatch(f"split ({a}, {b}) does not interpolate to the classical tuple")
    if tuple(weights) != (Fraction(a, m), Fraction(b, m)):
        raise ReplayMismatch(f"split ({a}, {b}) weights {weights} differ from (a/m, b/m)")
    return weights


class ConstantTable:
    """Memoised table of certified ``C_m`` bounds for one (field, precision).

    Entries are filled in increasing ``m``; each minimises over splits
    ``1 <= a <= b`` with ties going to the smallest ``a``. Completed entries
    are never modified, and extension is serialised by a lock.
    """

    def __init__(self, field: ScalarField, precision_bits: int = DEFAULT_PRECISION):
        self.field = ScalarField.parse(field)
        self.precision_bits = precision_bits
        self.evaluator = Evaluator(self.field, precision_bits)
        self._certs: list[BoundCertificate] = []
        self._lock = threading.RLock()
        root = Leaf(1, 1, (1,), block_exponent(1), None)
        self._certs.append(BoundCertificate(
            classical_tuple(1), self.field, self.evaluator.value(root), root))

    def __len__(self) -> int:
        return len(self._certs)

    def leaf(self, k: int, n: int, positions) -> Leaf:
        core = None if k == 1 else self.best(k).derivation
        return Leaf(k, n, tuple(positions), block_exponent(k), core)

    def split_node(self, a: int, b: int) -> Split:
        m = a + b
        self.extend(max(a, b))
        return Split(a, b, self.leaf(a, m, range(1, a + 1)),
                     self.leaf(b, m, range(a + 1, m + 1)), split_weights(a, b))

    def split_bound(self, a: int, b: int) -> BoundInterval:
        return self.evaluator.value(self.split_node(a, b))

    def base_constant(self, n: int, k: int) -> BoundInterval:
        if not 1 <= k <= n:
            raise BadArguments(f"need 1 <= k <= n, got k={k}, n={n}")
        return self.evaluator.value(self.leaf(k, n, range(1, k + 1)))

    def best(self, m: int) -> BoundCertificate:
        if m < 1:
            raise BadArguments(f"m must be >= 1, got {m}")
        self.extend(m)
        return self._certs[m - 1]

    def extend(self, m: int) -> None:
        if m <= len(self._certs):
            return
        with self._lock:
            while len(self._certs) < m:
                self._certs.append(self._compute(len(self._certs) + 1))

    def _log_best(self, k: int) -> BoundInterval:
        return self.evaluator.log_value(self._certs[k - 1].derivation)

    def _split_value(self, a: int, b: int) -> BoundInterval:
        # same arithmetic as Evaluator.value(split_node(a, b)), without building the tree
        ev, m = self.evaluator, a + b
        left = ev.leaf_log(self._log_best(a), a, m)
        right = ev.leaf_log(self._log_best(b), b, m)
        return ev.split_log(left, right, Fraction(a, m), Fraction(b, m)).exp()

    def _compute(self, m: int) -> BoundCertificate:
        best_a, best_val = None, None
        for a in range(1, m // 2 + 1):
            val = self._split_value(a, m - a)
            if best_val is None or libmp.mpf_lt(val.raw[1], best_val.raw[1]):
                best_a, best_val = a, val
        node = self.split_node(best_a, m - best_a)
        if self.evaluator.value(node) != best_val:
            raise ReplayMismatch(f"split ({best_a}, {m - best_a}) did not replay during the search")
        return BoundCertificate(classical_tuple(m), self.field, best_val, node)

    def candidates(self, m: int) -> list[tuple[int, int, BoundInterval]]:
        """Every split of ``m`` with its bound, for exhaustive cross-checks."""
        return [(a, m - a, self.split_bound(a, m - a)) for a in range(1, m // 2 + 1)]


_tables: dict[tuple[ScalarField, int], ConstantTable] = {}
_tables_lock = threading.Lock()


def get_table(field, precision_bits: int = DEFAULT_PRECISION) -> ConstantTable:
    key = (ScalarField.parse(field), int(precision_bits))
    with _tables_lock:
        table = _tables.get(key)
        if table is None:
            table = _tables[key] = ConstantTable(*key)
    return table


def base_constant(n: int, k: int, field, precision_bits: int = DEFAULT_PRECISION) -> BoundInterval:
    """``C_k * A_{2k/(k+1)}^{-(n-k)}``: bound for the k-block tuple of length n."""
    return get_table(field, precision_bits).base_constant(n, k)


def split_bound(a: int, b: int, field, precision_bits: int = DEFAULT_PRECISION) -> BoundInterval:
    return get_table(field, precision_bits).split_bound(a, b)


def best_constant(m: int, field, precision_bits: int = DEFAULT_PRECISION) -> BoundCertificate:
    return get_table(field, precision_bits).best(m)


def classical_table(max_n: int, field, precision_bits: int = DEFAULT_PRECISION) -> list[BoundCertificate]:
    if max_n < 1:
        raise BadArguments(f"max_n must be >= 1, got {max_n}")
    table = get_table(field, precision_bits)
    certs = [table.best(m) for m in range(1, max_n + 1)]
    replay = Evaluator(table.field, precision_bits)
    seen: set[int] = set()
    for cert in certs:
        cert.check(replay, seen)
    return certs


def recorded_split(cert: BoundCertificate) -> tuple[int, int] | None:
    node = cert.derivation
    return (node.a, node.b) if isinstance(node, Split) else None


def growth_baseline(m: int, field, precision_bits: int = DEFAULT_PRECISION) -> BoundInterval:
    """The exponential estimate ``(sqrt 2)^(m-1)`` or ``(2/sqrt pi)^(m-1)``."""
    if ScalarField.parse(field) is ScalarField.REAL:
        base = BoundInterval.exact(2, precision_bits).sqrt()
    else:
        base = 2 / BoundInterval.pi(precision_bits).sqrt()
    return base ** (m - 1)


def target_is_classical(t: ExponentTuple) -> bool:
    return t == classical_tuple(t.n)
