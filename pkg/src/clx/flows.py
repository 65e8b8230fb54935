"""Time-domain simulation of ``x' = -L x`` and the matrix exponential.

:func:`matrix_exponential` is a scaling-and-squaring Pade approximant
(degrees 3/5/7/9/13 selected from the 1-norm, Higham 2005).
:func:`matrix_exponential_eig` is the independent spectral route
``V exp(Lambda t) V^{-1}`` used as a cross-check on diagonalisable input.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
import scipy.linalg as sla

from .errors import DimensionMismatch, InputError, Overflow
from .spectral import eig

__all__ = [
    "Method",
    "Trajectory",
    "matrix_exponential",
    "matrix_exponential_eig",
    "simulate",
    "consensus_error",
    "draw_initial_state",
    "trajectory_to_csv",
    "write_trajectory_csv",
    "DIVERGENCE_FACTOR",
]

DIVERGENCE_FACTOR = 1e12
RK4_STEP_FACTOR = 0.1

_PADE = {
    3: (1.495585217958292e-2, [120., 60., 12., 1.]),
    5: (2.539398330063230e-1, [30240., 15120., 3360., 420., 30., 1.]),
    7: (9.504178996162932e-1, [17297280., 8648640., 1995840., 277200., 25200., 1512., 56., 1.]),
    9: (2.097847961257068e0, [17643225600., 8821612800., 2075673600., 302702400., 30270240.,
                              2162160., 110880., 3960., 90., 1.]),
}
_THETA13 = 5.371920351148152e0
_B13 = [64764752532480000., 32382376266240000., 7771770303897600., 1187353796428800.,
        129060195264000., 10559470521600., 670442572800., 33522128640., 1323241920.,
        40840800., 960960., 16380., 182., 1.]


def _pade_low(A, m):
    b = _PADE[m][1]
    n = A.shape[0]
    I = np.eye(n, dtype=A.dtype)
    A2 = A @ A
    pows = [I, A2]
    for _ in range(2, (m + 1) // 2):
        pows.append(pows[-1] @ A2)
    U = sum(b[2 * k + 1] * pows[k] for k in range(len(pows)))
    V = sum(b[2 * k] * pows[k] for k in range(len(pows)))
    return A @ U, V


def _pade13(A):
    b = _B13
    n = A.shape[0]
    I = np.eye(n, dtype=A.dtype)
    A2 = A @ A
    A4 = A2 @ A2
    A6 = A2 @ A4
    U = A @ (A6 @ (b[13] * A6 + b[11] * A4 + b[9] * A2) + b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * I)
    V = A6 @ (b[12] * A6 + b[10] * A4 + b[8] * A2) + b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * I
    return U, V


def matrix_exponential(M, t: float = 1.0) -> np.ndarray:
    """``exp(M t)`` by scaling and squaring.

    Raises
    ------
    Overflow
        If the result is not representable in double precision.
    """
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {M.shape}")
    if not math.isfinite(t) or t < 0:
        raise InputError("t must be finite and nonnegative")
    if not np.all(np.isfinite(M)):
        raise InputError("matrix has non-finite entries")
    A = M * t
    norm1 = float(np.abs(A).sum(axis=0).max()) if A.size else 0.0
    if norm1 == 0.0:
        return np.eye(A.shape[0], dtype=complex)
    with np.errstate(over="ignore", invalid="ignore"):
        for m in (3, 5, 7, 9):
            if norm1 <= _PADE[m][0]:
                U, V = _pade_low(A, m)
                return _finish(sla.solve(V - U, V + U), 0)
        s = max(0, int(math.ceil(math.log2(norm1 / _THETA13))))
        U, V = _pade13(A / 2.0 ** s)
        F = sla.solve(V - U, V + U)
        return _finish(F, s)


def _finish(F, s):
    for _ in range(s):
        F = F @ F
        if not np.all(np.isfinite(F)):
            break
    if not np.all(np.isfinite(F)):
        raise Overflow("matrix exponential overflowed double precision")
    return F


def matrix_exponential_eig(M, t: float = 1.0) -> np.ndarray:
    """``V exp(Lambda t) V^{-1}`` from the eigendecomposition (diagonalisable ``M`` only)."""
    dec = eig(M)
    if not dec.diagonalizable:
        raise InputError("eigen route needs a diagonalisable matrix")
    V = dec.V
    with np.errstate(over="raise"):
        try:
            E = np.exp(dec.eigenvalues * t)
        except FloatingPointError:
            raise Overflow("exp(lambda t) overflowed") from None
    return (V * E) @ np.linalg.inv(V)


class Method(str, Enum):
    EXP = "ExpStep"
    RK4 = "RK4"

    @classmethod
    def parse(cls, m):
        if isinstance(m, cls):
            return m
        key = str(m).lower()
        if key in ("exp", "expstep"):
            return cls.EXP
        if key == "rk4":
            return cls.RK4
        raise InputError(f"unknown method {m!r}; expected 'exp' or 'rk4'")


@dataclass(frozen=True)
class Trajectory:
    """Sampled states ``x(t_k)``; truncated at the first divergent sample."""

    times: np.ndarray
    states: np.ndarray
    method: Method
    consensus_error: np.ndarray
    diverged: bool = False
    truncated_at: float | None = None

    @property
    def final_state(self):
        return self.states[-1]

    def summary(self):
        return {
            "method": self.method.value,
            "samples": int(len(self.times)),
            "t_final": float(self.times[-1]),
            "diverged": self.diverged,
            "truncated_at": self.truncated_at,
            "final_consensus_error": float(self.consensus_error[-1]),
            "final_state": [{"re": float(z.real), "im": float(z.imag)} for z in self.final_state],
        }


def consensus_error(state) -> float:
    """Largest pairwise modulus ``max_{i,j} |x_i - x_j|``."""
    x = np.asarray(state, dtype=complex).ravel()
    if x.size == 0:
        raise InputError("empty state")
    return float(np.abs(x[:, None] - x[None, :]).max())


def _rk4_step_operator(L, h):
    n = L.shape[0]
    X = np.eye(n, dtype=complex)
    f = lambda Y: -L @ Y  # noqa: E731
    k1 = f(X)
    k2 = f(X + 0.5 * h * k1)
    k3 = f(X + 0.5 * h * k2)
    k4 = f(X + h * k3)
    return X + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


def simulate(L, x0, t_end: float, num_samples: int = 201, method="exp") -> Trajectory:
    """Sample the flow ``x' = -L x`` on ``num_samples`` evenly spaced times in ``[0, t_end]``.

    ``method="exp"`` evaluates ``exp(-L t_k) x0`` at each sample. ``"rk4"``
    integrates with the classical fourth-order Runge-Kutta scheme at a fixed
    step no larger than ``0.1 / rho(L)``. Once ``||x||_inf`` exceeds
    ``1e12 ||x0||_inf`` (or overflows) the trajectory is cut off and
    ``diverged`` is set.
    """
    L = np.asarray(L, dtype=complex)
    x0 = np.asarray(x0, dtype=complex).ravel()
    if L.ndim != 2 or L.shape[0] != L.shape[1] or L.shape[0] != x0.size:
        raise DimensionMismatch(f"L shape {L.shape} incompatible with x0 of length {x0.size}")
    if not t_end > 0:
        raise InputError("t_end must be positive")
    if num_samples < 2:
        raise InputError("num_samples must be >= 2")
    method = Method.parse(method)
    times = np.linspace(0.0, float(t_end), int(num_samples))
    limit = DIVERGENCE_FACTOR * np.abs(x0).max()

    states = [x0.copy()]
    diverged, cut = False, None
    if method is Method.EXP:
        for t in times[1:]:
            try:
                x = matrix_exponential(-L, t) @ x0
            except Overflow:
                x = None
            if x is None or not np.all(np.isfinite(x)) or np.abs(x).max() > limit:
                diverged, cut = True, float(t)
                break
            states.append(x)
    else:
        rho = float(np.abs(np.linalg.eigvals(L)).max())
        dt = times[1] - times[0]
        sub = 1 if rho == 0 else max(1, int(math.ceil(dt * rho / RK4_STEP_FACTOR)))
        P = np.linalg.matrix_power(_rk4_step_operator(L, dt / sub), sub)
        x = x0.copy()
        with np.errstate(over="ignore", invalid="ignore"):
            for t in times[1:]:
                x = P @ x
                if not np.all(np.isfinite(x)) or np.abs(x).max() > limit:
                    diverged, cut = True, float(t)
                    break
                states.append(x)

    S = np.array(states)
    k = len(S)
    err = np.array([consensus_error(s) for s in S])
    return Trajectory(times=times[:k], states=S, method=method, consensus_error=err,
                      diverged=diverged, truncated_at=cut)


def draw_initial_state(n: int, w=None, seed: int = 42, max_draws: int = 100) -> np.ndarray:
    """Seeded complex Gaussian ``x0``, redrawn while ``|w^H x0| < 1e-6 ||w|| ||x0||``."""
    rng = np.random.default_rng(seed)
    for _ in range(max_draws):
        x0 = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        if w is None:
            return x0
        w = np.asarray(w, dtype=complex)
        if abs(np.vdot(w, x0)) >= 1e-6 * np.linalg.norm(w) * np.linalg.norm(x0):
            return x0
    raise InputError("could not draw an initial state that is not orthogonal to w")


def trajectory_to_csv(traj: Trajectory) -> str:
    n = traj.states.shape[1]
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    header = ["t"]
    for i in range(1, n + 1):
        header += [f"re_x{i}", f"im_x{i}"]
    header.append("consensus_err")
    wr.writerow(header)
    for t, x, e in zip(traj.times, traj.states, traj.consensus_error):
        row = [repr(float(t))]
        for z in x:
            row += [repr(float(z.real)), repr(float(z.imag))]
        row.append(repr(float(e)))
        wr.writerow(row)
    return buf.getvalue()


def write_trajectory_csv(traj: Trajectory, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(trajectory_to_csv(traj))
