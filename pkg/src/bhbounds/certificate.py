"""Derivation trees, their evaluation, and the JSON certificate format.

A derivation is built from three node kinds:

* :class:`Leaf` -- a k-block tuple (``2k/(k+1)`` on k coordinates, 2 on the
  other ``n-k``) whose constant is ``C_k * A_{2k/(k+1)}^{-(n-k)}``. ``core``
  is the derivation of ``C_k`` itself (``None`` for ``k == 1``, ``C_1 = 1``).
* :class:`Split` -- interpolation of the two complementary block tuples of
  sizes ``a`` and ``b`` with weights ``(a/m, b/m)``.
* :class:`Interp` -- interpolation of arbitrary generator nodes.

All constants are evaluated in the log domain by :class:`Evaluator`, which is
the only arithmetic path used both when a bound is computed and when a stored
certificate is replayed. Replays therefore reproduce the stored interval bit
for bit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Any, Union

from mpmath import libmp

from .errors import BadArguments, ReplayMismatch
from .exponents import (
    ExponentTuple,
    ScalarField,
    WeightVector,
    block_exponent,
    classical_tuple,
    format_rational,
    interpolate,
    prop21_tuple,
)
from .intervals import BoundInterval
from .khinchin import MIN_THRESHOLD_PRECISION, haagerup_threshold, log_khinchin

SCHEMA_VERSION = 1


@dataclass(frozen=True, eq=False)
class Leaf:
    k: int
    n: int
    positions: tuple[int, ...]
    khinchin_exponent: Fraction
    core: "Node | None" = None

    def __post_init__(self):
        if not 1 <= self.k <= self.n:
            raise BadArguments(f"leaf needs 1 <= k <= n, got k={self.k}, n={self.n}")
        if self.khinchin_exponent != block_exponent(self.k):
            raise BadArguments(f"leaf exponent {self.khinchin_exponent} != 2k/(k+1) for k={self.k}")
        if (self.core is None) != (self.k == 1):
            raise BadArguments("a leaf carries a core derivation exactly when k > 1")

    @property
    def tuple(self) -> ExponentTuple:
        return prop21_tuple(self.n, self.k, self.positions)


@dataclass(frozen=True, eq=False)
class Split:
    a: int
    b: int
    left: Leaf
    right: Leaf
    weights: WeightVector

    @property
    def m(self) -> int:
        return self.a + self.b

    @property
    def tuple(self) -> ExponentTuple:
        return interpolate([self.left.tuple, self.right.tuple], self.weights)


@dataclass(frozen=True, eq=False)
class Interp:
    generators: tuple["Node", ...]
    weights: WeightVector

    @property
    def tuple(self) -> ExponentTuple:
        return interpolate([g.tuple for g in self.generators], self.weights)


Node = Union[Leaf, Split, Interp]


def validate(node: Node, seen: set[int] | None = None) -> None:
    """Check the exponent bookkeeping of a whole tree in exact arithmetic.

    ``seen`` collects ids of nodes already checked; pass the same set when
    validating many certificates that share subtrees.
    """
    if seen is None:
        seen = set()
    if id(node) in seen:
        return
    if isinstance(node, Leaf):
        node.tuple
        if node.core is not None:
            if node.core.tuple != classical_tuple(node.k):
                raise ReplayMismatch(f"core of a k={node.k} leaf does not generate the classical tuple")
            validate(node.core, seen)
    elif isinstance(node, Split):
        if node.left.n != node.m or node.right.n != node.m:
            raise ReplayMismatch("split leaves must have length a + b")
        if node.left.k != node.a or node.right.k != node.b:
            raise ReplayMismatch("split leaves must have block sizes a and b")
        if tuple(node.weights) != (Fraction(node.a, node.m), Fraction(node.b, node.m)):
            raise ReplayMismatch(f"split weights {node.weights} are not (a/m, b/m)")
        validate(node.left, seen)
        validate(node.right, seen)
    elif isinstance(node, Interp):
        if len(node.generators) != len(node.weights):
            raise ReplayMismatch("interp node has mismatched generators and weights")
        for g in node.generators:
            validate(g, seen)
    else:
        raise TypeError(f"not a derivation node: {node!r}")
    seen.add(id(node))


class Evaluator:
    """Log-domain evaluation of derivation nodes for one (field, precision).

    Holds a per-instance memo of Khinchin logs and node values; instances are
    not meant to be shared across threads.
    """

    def __init__(self, field: ScalarField, precision_bits: int):
        self.field = ScalarField.parse(field)
        self.precision_bits = precision_bits
        self._threshold: BoundInterval | None = None
        self._khinchin: dict[Fraction, BoundInterval] = {}
        self._memo: dict[int, tuple[Node, BoundInterval]] = {}

    @property
    def threshold(self) -> BoundInterval | None:
        if self.field is ScalarField.REAL and self._threshold is None:
            self._threshold = haagerup_threshold(max(self.precision_bits, MIN_THRESHOLD_PRECISION))
        return self._threshold

    def log_khinchin(self, p: Fraction) -> BoundInterval:
        lv = self._khinchin.get(p)
        if lv is None:
            lv = log_khinchin(p, self.field, self.precision_bits, self.threshold)
            self._khinchin[p] = lv
        return lv

    def log_block(self, k: int) -> BoundInterval:
        return self.log_khinchin(block_exponent(k))

    def zero(self) -> BoundInterval:
        return BoundInterval.exact(0, self.precision_bits)

    def leaf_log(self, core_log: BoundInterval, k: int, n: int) -> BoundInterval:
        if n == k:
            return core_log
        return core_log - self.log_block(k) * (n - k)

    def split_log(self, left: BoundInterval, right: BoundInterval,
                  w_left: Fraction, w_right: Fraction) -> BoundInterval:
        return left * w_left + right * w_right

    def log_value(self, node: Node) -> BoundInterval:
        hit = self._memo.get(id(node))
        if hit is not None and hit[0] is node:
            return hit[1]
        if isinstance(node, Leaf):
            core = self.zero() if node.core is None else self.log_value(node.core)
            out = self.leaf_log(core, node.k, node.n)
        elif isinstance(node, Split):
            out = self.split_log(self.log_value(node.left), self.log_value(node.right),
                                 node.weights[0], node.weights[1])
        elif isinstance(node, Interp):
            out = self.zero()
            for g, w in zip(node.generators, node.weights):
                if w:
                    out = out + self.log_value(g) * w
        else:
            raise TypeError(f"not a derivation node: {node!r}")
        self._memo[id(node)] = (node, out)
        return out

    def value(self, node: Node) -> BoundInterval:
        return self.log_value(node).exp()


@dataclass(frozen=True, eq=False)
class BoundCertificate:
    """An upper bound for the constant of ``target`` plus the tree proving it."""

    target: ExponentTuple
    field: ScalarField
    value: BoundInterval
    derivation: Node
    family: tuple[ExponentTuple, ...] | None = dc_field(default=None)

    @property
    def precision_bits(self) -> int:
        return self.value.precision_bits

    @property
    def upper(self) -> Fraction:
        return self.value.hi_fraction

    def replay(self, evaluator: Evaluator | None = None) -> BoundInterval:
        ev = evaluator or Evaluator(self.field, self.precision_bits)
        return ev.value(self.derivation)

    def check(self, evaluator: Evaluator | None = None,
              seen: set[int] | None = None) -> "BoundCertificate":
        """Raise :class:`ReplayMismatch` unless the tree replays to ``value``
        and interpolates to ``target``."""
        validate(self.derivation, seen)
        if self.derivation.tuple != self.target:
            raise ReplayMismatch(f"derivation generates {self.derivation.tuple}, not {self.target}")
        got = self.replay(evaluator)
        if got != self.value:
            raise ReplayMismatch(f"derivation replays to {got!r}, certificate says {self.value!r}")
        return self

    def to_dict(self, digits: int = 30) -> dict[str, Any]:
        out: dict[str, Any] = {
            "schema": SCHEMA_VERSION,
            "target": str(self.target),
            "field": self.field.value,
            "precision_bits": self.precision_bits,
            "value": interval_to_dict(self.value, digits),
            "derivation": node_to_dict(self.derivation),
        }
        if self.family is not None:
            out["family"] = [str(t) for t in self.family]
        return out

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "BoundCertificate":
        if data.get("schema") != SCHEMA_VERSION:
            raise ValueError(f"unsupported certificate schema {data.get('schema')!r}")
        prec = int(data["precision_bits"])
        family = data.get("family")
        return cls(
            target=ExponentTuple.parse(data["target"]),
            field=ScalarField.parse(data["field"]),
            value=interval_from_dict(data["value"], prec),
            derivation=node_from_dict(data["derivation"]),
            family=None if family is None else tuple(ExponentTuple.parse(t) for t in family),
        )

    @classmethod
    def from_json(cls, text: str) -> "BoundCertificate":
        return cls.from_dict(json.loads(text))


# -- JSON codec -----------------------------------------------------------------

def _mpf_to_str(x: tuple) -> str:
    sign, man, exp, _ = x
    if not man and x != libmp.fzero:
        raise ValueError("non-finite endpoint")
    return f"{'-' if sign else ''}{int(man)}p{int(exp)}"


def _mpf_from_str(text: str) -> tuple:
    man, _, exp = text.partition("p")
    return libmp.from_man_exp(int(man), int(exp))


def interval_to_dict(iv: BoundInterval, digits: int = 30) -> dict[str, str]:
    lo, hi = iv.raw
    return {
        "lo": _mpf_to_str(lo),
        "hi": _mpf_to_str(hi),
        "lo_decimal": iv.decimal_lo(digits),
        "hi_decimal": iv.decimal_hi(digits),
    }


def interval_from_dict(data: dict[str, str], precision_bits: int) -> BoundInterval:
    return BoundInterval.from_raw(_mpf_from_str(data["lo"]), _mpf_from_str(data["hi"]), precision_bits)


def _weights_to_list(w: WeightVector) -> list[str]:
    return [format_rational(x) for x in w]


def node_to_dict(node: Node) -> dict[str, Any]:
    if isinstance(node, Leaf):
        return {
            "kind": "leaf",
            "k": node.k,
            "n": node.n,
            "positions": list(node.positions),
            "khinchin_exponent": format_rational(node.khinchin_exponent),
            "core": None if node.core is None else node_to_dict(node.core),
        }
    if isinstance(node, Split):
        return {
            "kind": "split",
            "a": node.a,
            "b": node.b,
            "weights": _weights_to_list(node.weights),
            "left": node_to_dict(node.left),
            "right": node_to_dict(node.right),
        }
    if isinstance(node, Interp):
        return {
            "kind": "interp",
            "weights": _weights_to_list(node.weights),
            "generators": [node_to_dict(g) for g in node.generators],
        }
    raise TypeError(f"not a derivation node: {node!r}")


def node_from_dict(data: dict[str, Any]) -> Node:
    kind = data["kind"]
    if kind == "leaf":
        core = data.get("core")
        return Leaf(
            k=int(data["k"]),
            n=int(data["n"]),
            positions=tuple(int(p) for p in data["positions"]),
            khinchin_exponent=Fraction(data["khinchin_exponent"]),
            core=None if core is None else node_from_dict(core),
        )
    weights = WeightVector(tuple(Fraction(w) for w in data["weights"]))
    if kind == "split":
        left, right = node_from_dict(data["left"]), node_from_dict(data["right"])
        if not (isinstance(left, Leaf) and isinstance(right, Leaf)):
            raise ValueError("split children must be leaves")
        return Split(int(data["a"]), int(data["b"]), left, right, weights)
    if kind == "interp":
        return Interp(tuple(node_from_dict(g) for g in data["generators"]), weights)
    raise ValueError(f"unknown derivation node kind {kind!r}")
