"""Real dominance of complex vectors and the phase-angle (tan) conditions.

A vector is real dominant when every entry has phase in [-45, 45] degrees,
i.e. ``Re(z) >= |Im(z)|``. The tan conditions express that same phase
information through the entries of the translated matrix ``B = dI - L``:
for a left eigenvector ``w`` of ``B`` with real positive eigenvalue,

    sum_j b_ji |w_j| sin(theta_ji - phi_j) / sum_j b_ji |w_j| cos(theta_ji - phi_j)
        = tan(-phi_i),

with ``b``/``theta`` the moduli/phases of ``B`` and ``phi`` the phases of
``w``. Ratios in [-1, 1] are equivalent to real dominance of ``w``. The
conditions are sufficient for the flow properties, not necessary.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import IndeterminateRatio, NotAnEigenvector
from .spectral import translated_matrix

__all__ = [
    "DominanceReport",
    "TanConditionReport",
    "Side",
    "real_dominance",
    "left_tan_condition",
    "right_tan_condition",
]

DOM_TOL = 1e-12
RESIDUAL_TOL = 1e-6
DENOM_TOL = 1e-12
IDENTITY_TOL = 1e-6


@dataclass(frozen=True)
class DominanceReport:
    vector: np.ndarray
    per_entry_phase: np.ndarray
    real_dominant: bool
    strictly_real_dominant: bool
    violating_indices: tuple

    def to_dict(self):
        return {
            "per_entry_phase_deg": [float(p) for p in self.per_entry_phase],
            "real_dominant": self.real_dominant,
            "strictly_real_dominant": self.strictly_real_dominant,
            "violating_indices": list(self.violating_indices),
        }


def real_dominance(z, strict: bool = False) -> DominanceReport:
    """Entrywise test of ``Re(z_i) >= |Im(z_i)|``.

    Zero entries satisfy the non-strict test and fail the strict one.
    ``violating_indices`` refers to the requested mode.
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    s = max(1.0, float(np.abs(z).max())) if z.size else 1.0
    margin = z.real - np.abs(z.imag)
    weak = margin >= -DOM_TOL * s
    strong = margin > DOM_TOL * s
    bad = ~strong if strict else ~weak
    return DominanceReport(
        vector=z,
        per_entry_phase=np.degrees(np.angle(z)),
        real_dominant=bool(weak.all()),
        strictly_real_dominant=bool(strong.all()),
        violating_indices=tuple(int(i) for i in np.flatnonzero(bad)),
    )


class Side(str, Enum):
    LEFT = "Left"
    RIGHT = "Right"


@dataclass(frozen=True)
class TanConditionReport:
    """Per-index tan ratios.

    ``ratios[i]`` is NaN where the eigenvector entry vanishes (both sums are
    zero); such entries pass the closed test and fail the open one. A vanishing
    denominator with a nonzero numerator gives an infinite ratio.
    """

    ratios: np.ndarray
    all_in_closed_unit: bool
    all_in_open_unit: bool
    side: Side
    matrix_used: str
    eigenvalue: complex
    indeterminate: tuple
    identity_max_error: float
    self_check_passed: bool

    def to_dict(self):
        return {
            "side": self.side.value,
            "matrix_used": self.matrix_used,
            "ratios": [None if not np.isfinite(r) else float(r) for r in self.ratios],
            "all_in_closed_unit": self.all_in_closed_unit,
            "all_in_open_unit": self.all_in_open_unit,
            "indeterminate": list(self.indeterminate),
            "self_check_passed": self.self_check_passed,
        }


def _eigen_check(M, x, left):
    """Rayleigh quotient of ``x`` and a residual check; returns the eigenvalue."""
    xx = np.vdot(x, x).real
    if xx == 0:
        raise NotAnEigenvector("zero vector")
    if left:
        y = x.conj() @ M  # row vector x^H M
        lam = (y @ x) / xx
        resid = np.linalg.norm(y - lam * x.conj())
    else:
        y = M @ x
        lam = np.vdot(x, y) / xx
        resid = np.linalg.norm(y - lam * x)
    scale = max(np.linalg.norm(M, 2), 1e-300) * np.sqrt(xx)
    if resid > RESIDUAL_TOL * scale:
        raise NotAnEigenvector(f"eigen-residual {resid:.3g} exceeds {RESIDUAL_TOL:g}*||B||*||x||")
    if lam.real <= 0 or abs(lam.imag) > 1e-8 * abs(lam):
        raise NotAnEigenvector(f"eigenvalue {lam:.6g} is not real positive")
    return complex(lam)


def _ratios(num, den, expected, scale, on_indeterminate):
    n = len(num)
    ratios = np.empty(n)
    indet = []
    for i in range(n):
        if abs(den[i]) <= DENOM_TOL * scale:
            indet.append(i)
            if abs(num[i]) <= DENOM_TOL * scale:
                ratios[i] = np.nan
            else:
                ratios[i] = np.copysign(np.inf, num[i] * (1.0 if den[i] >= 0 else -1.0))
        else:
            ratios[i] = num[i] / den[i]
    if indet and on_indeterminate == "raise":
        raise IndeterminateRatio(f"vanishing denominators at indices {indet}")
    finite = np.isfinite(ratios)
    zero_entry = np.isnan(ratios)
    closed = bool(np.all(zero_entry | (finite & (np.abs(ratios) <= 1 + 1e-12))))
    open_ = bool(np.all(finite & (np.abs(ratios) < 1)))
    det = finite & np.isfinite(expected)
    err = np.abs(ratios[det] - expected[det]) / np.maximum(1.0, np.abs(ratios[det]))
    max_err = float(err.max()) if err.size else 0.0
    return ratios, closed, open_, tuple(indet), max_err


def left_tan_condition(B, w, on_indeterminate: str = "flag") -> TanConditionReport:
    """Column-wise tan ratios for a left eigenvector ``w`` of ``B``.

    Parameters
    ----------
    B : (n, n) complex array
        Translated matrix whose dominant eigenvalue is real and positive.
    w : (n,) complex array
        Left eigenvector (``w^H B = lambda w^H``) in the gauge to be tested.
    on_indeterminate : {"flag", "raise"}
        Whether vanishing denominators are reported or raise
        :class:`IndeterminateRatio`.
    """
    B = np.asarray(B, dtype=complex)
    w = np.asarray(w, dtype=complex)
    lam = _eigen_check(B, w, left=True)
    b, theta = np.abs(B), np.angle(B)
    mag, phi = np.abs(w), np.angle(w)
    # rows j, columns i: b_ji |w_j| (sin|cos)(theta_ji - phi_j)
    arg = theta - phi[:, None]
    weight = b * mag[:, None]
    num = (weight * np.sin(arg)).sum(axis=0)
    den = (weight * np.cos(arg)).sum(axis=0)
    scale = abs(lam) * mag.max()
    with np.errstate(over="ignore", invalid="ignore"):
        expected = np.where(mag > 0, np.tan(-phi), np.nan)
    ratios, closed, open_, indet, err = _ratios(num, den, expected, scale, on_indeterminate)
    return TanConditionReport(
        ratios=ratios, all_in_closed_unit=closed, all_in_open_unit=open_, side=Side.LEFT,
        matrix_used="B", eigenvalue=lam, indeterminate=indet,
        identity_max_error=err, self_check_passed=err <= IDENTITY_TOL,
    )


def right_tan_condition(L, v, d: float | None = None, on_indeterminate: str = "flag") -> TanConditionReport:
    """Row-wise tan ratios for a right kernel eigenvector ``v`` of ``L``.

    Evaluated on ``B = dI - L`` (``d`` defaults as in
    :func:`clx.spectral.translated_matrix`), where the eigenvalue ``d`` has
    zero phase: ``sum_j b_ij |v_j| sin(theta_ij + phi_j) / sum_j b_ij |v_j|
    cos(theta_ij + phi_j) = tan(phi_i)``.
    """
    B, d = translated_matrix(L, d)
    v = np.asarray(v, dtype=complex)
    lam = _eigen_check(B, v, left=False)
    b, theta = np.abs(B), np.angle(B)
    mag, phi = np.abs(v), np.angle(v)
    arg = theta + phi[None, :]
    weight = b * mag[None, :]
    num = (weight * np.sin(arg)).sum(axis=1)
    den = (weight * np.cos(arg)).sum(axis=1)
    scale = abs(lam) * mag.max()
    with np.errstate(over="ignore", invalid="ignore"):
        expected = np.where(mag > 0, np.tan(phi), np.nan)
    ratios, closed, open_, indet, err = _ratios(num, den, expected, scale, on_indeterminate)
    return TanConditionReport(
        ratios=ratios, all_in_closed_unit=closed, all_in_open_unit=open_, side=Side.RIGHT,
        matrix_used=f"B=dI-L (d={d:.6g})", eigenvalue=lam, indeterminate=indet,
        identity_max_error=err, self_check_passed=err <= IDENTITY_TOL,
    )
