"""Pointwise algebra of (0,q)-forms on C^n.

Coefficients are indexed by strictly increasing multi-indices.  Everything
here is exact double-precision arithmetic on values supplied by the caller
(complex Hessians, gradients, form coefficients at one point); no
differentiation and no tolerances live in this module.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator, Mapping

import numpy as np

__all__ = [
    "MultiIndex",
    "FormValue",
    "HermitianField",
    "perm_sign",
    "coeff_mH",
    "hessian_action",
    "gradient_pairing_norm_sq",
    "theta",
    "self_bound_margin",
    "increasing_indices",
]


@dataclass(frozen=True)
class MultiIndex:
    """Strictly increasing tuple of 1-based axis indices."""

    axes: tuple[int, ...]

    def __post_init__(self):
        axes = tuple(int(a) for a in self.axes)
        object.__setattr__(self, "axes", axes)
        if any(a < 1 for a in axes):
            raise ValueError(f"axis indices must be >= 1, got {axes}")
        if any(a >= b for a, b in zip(axes, axes[1:])):
            # Reject rather than sort: silent normalization hides sign bugs.
            raise ValueError(f"multi-index must be strictly increasing, got {axes}")

    def __len__(self) -> int:
        return len(self.axes)

    def __iter__(self) -> Iterator[int]:
        return iter(self.axes)

    def __contains__(self, m: int) -> bool:
        return m in self.axes


def _as_index(I) -> MultiIndex:
    return I if isinstance(I, MultiIndex) else MultiIndex(tuple(I))


def increasing_indices(n: int, q: int) -> list[MultiIndex]:
    """All increasing multi-indices of length q over axes 1..n."""
    return [MultiIndex(c) for c in combinations(range(1, n + 1), q)]


@dataclass(frozen=True)
class FormValue:
    """A (0,q)-form at one point of C^n: coefficient per increasing index.

    Absent keys mean a zero coefficient.
    """

    n: int
    q: int
    coeffs: Mapping[MultiIndex, complex] = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 1 or self.q < 0 or self.q > self.n:
            raise ValueError(f"invalid form signature n={self.n}, q={self.q}")
        clean: dict[MultiIndex, complex] = {}
        for key, val in self.coeffs.items():
            idx = _as_index(key)
            if len(idx) != self.q:
                raise ValueError(f"index {idx.axes} has length {len(idx)}, expected {self.q}")
            if idx.axes and idx.axes[-1] > self.n:
                raise ValueError(f"index {idx.axes} exceeds ambient dimension {self.n}")
            clean[idx] = complex(val)
        object.__setattr__(self, "coeffs", clean)

    def coeff(self, I) -> complex:
        return self.coeffs.get(_as_index(I), 0j)

    def norm_sq(self) -> float:
        """Squared pointwise norm |u|^2 = sum' |u_I|^2."""
        return float(sum(abs(c) ** 2 for c in self.coeffs.values()))


@dataclass(frozen=True)
class HermitianField:
    """Pointwise data of a real C^2 function: value, complex gradient and
    complex Hessian d^2 f / dz_l dzbar_k at one point.

    The Hessian matrix must be conjugate-symmetric.
    """

    n: int
    matrix: np.ndarray
    gradient: np.ndarray
    value: float = 0.0

    def __post_init__(self):
        matrix = np.array(self.matrix, dtype=complex)
        gradient = np.array(self.gradient, dtype=complex)
        if matrix.shape != (self.n, self.n):
            raise ValueError(f"Hessian must be {self.n}x{self.n}, got {matrix.shape}")
        if gradient.shape != (self.n,):
            raise ValueError(f"gradient must have length {self.n}, got {gradient.shape}")
        herm_gap = np.max(np.abs(matrix - matrix.conj().T)) if self.n else 0.0
        scale = max(1.0, float(np.max(np.abs(matrix))) if matrix.size else 0.0)
        if herm_gap > 1e-12 * scale:
            raise ValueError("Hessian matrix is not conjugate-symmetric")
        matrix.setflags(write=False)
        gradient.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "gradient", gradient)
        object.__setattr__(self, "value", float(self.value))

    @classmethod
    def zero(cls, n: int) -> "HermitianField":
        return cls(n, np.zeros((n, n)), np.zeros(n), 0.0)

    @classmethod
    def constant(cls, n: int, value: float) -> "HermitianField":
        return cls(n, np.zeros((n, n)), np.zeros(n), value)


def perm_sign(m: int, H) -> int:
    """Sign of the permutation sorting (m, h_1, ..., h_{q-1}) increasingly.

    Returns 0 when m already occurs in H.
    """
    H = _as_index(H)
    if m < 1:
        raise ValueError(f"axis index must be >= 1, got {m}")
    if m in H:
        return 0
    # H is already increasing, so the sign is (-1)^(number of entries below m).
    below = sum(1 for h in H if h < m)
    return -1 if below % 2 else 1


def coeff_mH(u: FormValue, m: int, H) -> complex:
    """Signed coefficient u_{mH}: the permutation sign times u over the
    sorted index, and 0 when m repeats an entry of H."""
    H = _as_index(H)
    if len(H) + 1 != u.q:
        raise ValueError(f"H has length {len(H)}, expected {u.q - 1} for a degree-{u.q} form")
    if m < 1 or m > u.n:
        raise ValueError(f"axis {m} out of range 1..{u.n}")
    sign = perm_sign(m, H)
    if sign == 0:
        return 0j
    merged = MultiIndex(tuple(sorted((m,) + H.axes)))
    return sign * u.coeff(merged)


def _check_field_form(f: HermitianField, u: FormValue):
    if f.n != u.n:
        raise ValueError(f"dimension mismatch: field n={f.n}, form n={u.n}")
    if u.q < 1:
        raise ValueError("form degree must be >= 1")


def hessian_action(f: HermitianField, u: FormValue) -> float:
    """Action of the complex Hessian of f on the form u:
    sum'_{|J|=q-1} sum_{k,l} f_{l kbar} u_{lJ} conj(u_{kJ}).

    Real for conjugate-symmetric matrices; the tiny imaginary residue of
    floating-point summation is discarded.
    """
    _check_field_form(f, u)
    total = 0j
    for J in increasing_indices(u.n, u.q - 1):
        comps = [coeff_mH(u, m, J) for m in range(1, u.n + 1)]
        for l in range(u.n):
            cl = comps[l]
            if cl == 0:
                continue
            for k in range(u.n):
                ck = comps[k]
                if ck == 0:
                    continue
                total += f.matrix[l, k] * cl * np.conj(ck)
    return float(total.real)


def gradient_pairing_norm_sq(f: HermitianField, u: FormValue) -> float:
    """|<df, u>|^2 = sum'_{|J|=q-1} |sum_l (df/dz_l) u_{lJ}|^2.

    Equals i df wedge dbar-f acting on (u, u); for q = 1 it reduces to
    |sum_j (df/dz_j) u_j|^2.
    """
    _check_field_form(f, u)
    total = 0.0
    for J in increasing_indices(u.n, u.q - 1):
        s = sum(f.gradient[l - 1] * coeff_mH(u, l, J) for l in range(1, u.n + 1))
        total += abs(s) ** 2
    return float(total)


def theta(lam: HermitianField, tau: HermitianField, u: FormValue) -> float:
    """Twisted curvature term pairing the two weights against u:

        tau * i d dbar(lam)(u,u) - i d dbar(tau)(u,u) - |<d tau, u>|^2 / tau
    """
    _check_field_form(lam, u)
    _check_field_form(tau, u)
    if lam.n != tau.n:
        raise ValueError("weight fields live in different dimensions")
    if tau.value <= 0:
        raise ValueError(f"multiplier weight must be positive, got {tau.value}")
    return (
        tau.value * hessian_action(lam, u)
        - hessian_action(tau, u)
        - gradient_pairing_norm_sq(tau, u) / tau.value
    )


def self_bound_margin(psi: HermitianField, u: FormValue, K: float) -> float:
    """Margin of the gradient self-bound at this point and form:

        K^2 * i d dbar(psi)(u,u) - i d(psi) wedge dbar(psi)(u,u)

    Nonnegative return means the self-bound K holds here.
    """
    if K <= 0:
        raise ValueError(f"self-bound constant must be positive, got {K}")
    return K * K * hessian_action(psi, u) - gradient_pairing_norm_sq(psi, u)
