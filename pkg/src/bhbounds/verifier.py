"""Empirical lower bounds for the constants on explicit small forms.

An n-linear form on ``K^d x ... x K^d`` is stored as its coefficient tensor
``A(e_i1, ..., e_in)``. For exponents ``q`` the ratio

    mixed_norm(A, q) / ||A||

is a lower bound for the optimal constant attached to ``q`` (forms on
``K^d`` extend to ``c_0`` with the same norm), so every ratio must stay below
any certified upper bound. Everything here runs in double precision.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from .errors import (
    ArityMismatch,
    BudgetExceeded,
    EmptyCampaign,
    NotBohnenblustHille,
    WrongField,
)
from .exponents import ExponentTuple, ScalarField

MAX_REAL_SLOTS = 16


@dataclass(frozen=True, eq=False)
class FormTensor:
    coeffs: np.ndarray
    field: ScalarField = ScalarField.REAL

    def __post_init__(self):
        field = ScalarField.parse(self.field)
        dtype = float if field is ScalarField.REAL else complex
        coeffs = np.asarray(self.coeffs, dtype=dtype)
        if coeffs.ndim < 1 or len(set(coeffs.shape)) != 1:
            raise ValueError(f"coefficient tensor must be d x ... x d, got shape {coeffs.shape}")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "field", field)

    @classmethod
    def from_flat(cls, n: int, d: int, values: Sequence, field=ScalarField.REAL) -> "FormTensor":
        values = np.asarray(values)
        if values.size != d ** n:
            raise ValueError(f"expected {d ** n} coefficients, got {values.size}")
        return cls(values.reshape((d,) * n), field)

    @property
    def n(self) -> int:
        return self.coeffs.ndim

    @property
    def d(self) -> int:
        return self.coeffs.shape[0]

    def scaled(self, factor: float) -> "FormTensor":
        return FormTensor(self.coeffs * factor, self.field)

    def transposed(self, perm: Sequence[int]) -> "FormTensor":
        return FormTensor(np.transpose(self.coeffs, perm), self.field)

    def as_complex(self) -> "FormTensor":
        return FormTensor(self.coeffs.astype(complex), ScalarField.COMPLEX)


def littlewood_witness() -> FormTensor:
    """The bilinear form ``x1 y1 + x1 y2 + x2 y1 - x2 y2``."""
    return FormTensor(np.array([[1.0, 1.0], [1.0, -1.0]]))


def mixed_norm(T: FormTensor, q: ExponentTuple) -> float:
    """Iterated norm: ``l_{q_n}`` over the last index first, ``l_{q_1}`` last."""
    if q.n != T.n:
        raise ArityMismatch(f"exponent tuple has length {q.n}, form has arity {T.n}")
    arr = np.abs(T.coeffs)
    for qi in reversed(q.entries):
        p = float(qi)
        arr = np.sum(arr ** p, axis=-1) ** (1.0 / p)
    return float(arr)


def _sign_vectors(d: int) -> np.ndarray:
    return np.array(list(itertools.product((1.0, -1.0), repeat=d)))


def sup_norm_real(T: FormTensor) -> float:
    """Exact ``sup |A(x_1, ..., x_n)|`` over the unit ball of ``l_inf^d``.

    A multilinear form attains its norm at sign vectors; the last slot is
    maximised in closed form (the l1 norm of the contracted vector), so only
    ``2^((n-1) d)`` sign patterns are enumerated.
    """
    if T.field is not ScalarField.REAL:
        raise WrongField("sup_norm_real needs a real form")
    if T.n * T.d > MAX_REAL_SLOTS:
        raise BudgetExceeded(f"n*d = {T.n * T.d} exceeds the exhaustive budget {MAX_REAL_SLOTS}")
    signs = _sign_vectors(T.d)
    # the first slot may be fixed up to a global sign
    first = signs[: max(1, len(signs) // 2)] if T.n > 1 else signs
    arr = np.tensordot(first, T.coeffs, axes=([1], [0])) if T.n > 1 else T.coeffs
    for _ in range(T.n - 2):
        # arr has shape (P, d, ..., d); contract the leading tensor slot with every sign vector
        arr = np.tensordot(arr, signs, axes=([1], [1]))
        arr = np.moveaxis(arr, -1, 1).reshape(-1, *arr.shape[1:-1])
    return float(np.max(np.sum(np.abs(arr), axis=-1)))


def _contract_except(coeffs: np.ndarray, z: list[np.ndarray], skip: int) -> np.ndarray:
    arr = coeffs
    # contract from the last slot down so earlier axis numbers stay valid
    for k in reversed(range(coeffs.ndim)):
        if k != skip:
            arr = np.tensordot(arr, z[k], axes=([k], [0]))
    return arr


def sup_norm_complex_ascent(T: FormTensor, restarts: int = 8, iters: int = 50, seed=0) -> float:
    """Lower bound on ``||A||`` over torus inputs by alternating maximisation.

    With every slot but one fixed the form is linear in the free slot, whose
    optimum over the torus is the phase-aligned vector, worth the l1 norm of
    the contraction. Each sweep therefore never decreases the value.
    """
    if T.field is not ScalarField.COMPLEX:
        raise WrongField("sup_norm_complex_ascent needs a complex form")
    rng = np.random.default_rng(seed)
    coeffs = T.coeffs
    best = 0.0
    for _ in range(max(1, restarts)):
        z = [np.exp(2j * np.pi * rng.random(T.d)) for _ in range(T.n)]
        value = 0.0
        for _ in range(iters):
            prev = value
            for k in range(T.n):
                w = _contract_except(coeffs, z, k)
                mag = np.abs(w)
                z[k] = np.where(mag > 0, np.conj(w) / np.where(mag > 0, mag, 1.0), z[k])
                value = float(np.sum(mag))
            if value - prev <= 1e-15 * max(1.0, value):
                break
        best = max(best, value)
    return best


@dataclass(frozen=True)
class RatioReport:
    mixed_norm: float
    sup_norm: float
    ratio: float
    sup_exact: bool
    seed: int | None
    trial: int | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def ratio_report(T: FormTensor, q: ExponentTuple, seed: int | None = None,
                 trial: int | None = None, restarts: int = 8, iters: int = 50) -> RatioReport:
    mixed = mixed_norm(T, q)
    if T.field is ScalarField.REAL:
        sup, exact = sup_norm_real(T), True
    else:
        sup, exact = sup_norm_complex_ascent(T, restarts, iters, seed=[seed or 0, trial or 0, 1]), False
    return RatioReport(mixed, sup, mixed / sup if sup > 0 else 0.0, exact, seed, trial)


@dataclass(frozen=True)
class CampaignResult:
    reports: tuple[RatioReport, ...]
    max_ratio: float
    argmax: int

    def summary(self) -> dict:
        return {
            "kind": "summary",
            "trials": len(self.reports),
            "max_ratio": self.max_ratio,
            "argmax_trial": self.argmax,
            "sup_exact": all(r.sup_exact for r in self.reports),
        }


def random_form(n: int, d: int, field, rng: np.random.Generator,
                distribution: str = "sign") -> FormTensor:
    field = ScalarField.parse(field)
    shape = (d,) * n
    if field is ScalarField.REAL:
        if distribution == "sign":
            coeffs = rng.choice((-1.0, 1.0), size=shape)
        elif distribution == "gaussian":
            coeffs = rng.standard_normal(shape)
        else:
            raise ValueError(f"unknown distribution {distribution!r}")
    else:
        if distribution == "sign":
            coeffs = np.exp(2j * np.pi * rng.random(shape))
        elif distribution == "gaussian":
            coeffs = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
        else:
            raise ValueError(f"unknown distribution {distribution!r}")
    return FormTensor(coeffs, field)


def campaign(n: int, d: int, q: ExponentTuple, trials: int, seed: int = 0,
             field=ScalarField.REAL, distribution: str = "sign", workers: int = 1,
             restarts: int = 8, iters: int = 50) -> CampaignResult:
    """Ratios for ``trials`` random forms; trial i draws from the stream (seed, i).

    The output depends only on ``(seed, trials)`` and the sampling options,
    never on ``workers``.
    """
    field = ScalarField.parse(field)
    if q.n != n:
        raise ArityMismatch(f"exponent tuple has length {q.n}, forms have arity {n}")
    if not q.is_bohnenblust_hille:
        raise NotBohnenblustHille(f"{q} has defect {q.defect}")
    if trials < 1:
        raise EmptyCampaign("a campaign needs at least one trial")
    if field is ScalarField.REAL and n * d > MAX_REAL_SLOTS:
        raise BudgetExceeded(f"n*d = {n * d} exceeds the exhaustive budget {MAX_REAL_SLOTS}")

    def one(i: int) -> RatioReport:
        rng = np.random.default_rng([seed, i])
        T = random_form(n, d, field, rng, distribution)
        return ratio_report(T, q, seed, i, restarts, iters)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(one, range(trials)))
    else:
        reports = [one(i) for i in range(trials)]
    ratios = [r.ratio for r in reports]
    argmax = int(np.argmax(ratios))
    return CampaignResult(tuple(reports), ratios[argmax], argmax)
