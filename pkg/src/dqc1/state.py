"""The one-clean-qubit register: output state, readout, and trace estimation.

A register of n + 1 qubits starts with the special qubit (qubit 0) in the
mixed state (I + alpha*Z)/2 and n unpolarized qubits in I/2**n.  A Hadamard on
qubit 0 followed by a controlled U on the rest leaves the block state

    rho = [[I, alpha*U^dag], [alpha*U, I]] / 2**(n+1),

whose X/Y readout on qubit 0 encodes tr(U)/2**n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import schur

from .linalg import num_qubits, require_unitary, MAX_QUBITS
from .rng import philox_stream


@dataclass(frozen=True)
class Dqc1State:
    """Output state of the circuit together with its defining (U, alpha, n)."""

    n: int
    alpha: float
    unitary: np.ndarray
    rho: np.ndarray

    @property
    def total_qubits(self) -> int:
        return self.n + 1


@dataclass(frozen=True)
class TraceEstimate:
    """Result of the simulated repeated-measurement protocol."""

    estimate: complex
    runs_used: int
    epsilon: float
    p_error: float
    seed: int


def build_state(u: np.ndarray, alpha: float) -> Dqc1State:
    """Assemble the (n+1)-qubit output state for unitary ``u`` and polarization ``alpha``."""
    u = require_unitary(u)
    n = num_qubits(u)
    if n + 1 > MAX_QUBITS:
        raise ValueError(f"register of {n + 1} qubits exceeds the cap of {MAX_QUBITS}")
    if not abs(alpha) <= 1:
        raise ValueError(f"polarization must satisfy |alpha| <= 1, got {alpha}")
    big_n = 2**n
    rho = np.empty((2 * big_n, 2 * big_n), dtype=np.complex128)
    rho[:big_n, :big_n] = np.eye(big_n)
    rho[big_n:, big_n:] = np.eye(big_n)
    rho[:big_n, big_n:] = alpha * u.conj().T
    rho[big_n:, :big_n] = alpha * u
    rho /= 2 * big_n
    return Dqc1State(n=n, alpha=float(alpha), unitary=u, rho=rho)


def pauli_expectations(state: Dqc1State) -> tuple[float, float]:
    """(<X>, <Y>) of the special qubit.

    Computed from tr(U) directly and cross-checked against the operator
    expectations tr(rho (X x I)) and tr(rho (Y x I)); the two routes must
    agree to 1e-12.
    """
    big_n = 2**state.n
    tr_u = complex(np.trace(state.unitary))
    x = state.alpha * tr_u.real / big_n
    y = -state.alpha * tr_u.imag / big_n
    # operator route: X and Y on qubit 0 only touch the off-diagonal blocks
    upper = state.rho[:big_n, big_n:]
    x_op = 2 * float(np.trace(upper).real)
    y_op = 2 * float(np.trace(upper).imag)
    if max(abs(x - x_op), abs(y - y_op)) > 1e-12:
        raise AssertionError("operator and trace readouts disagree beyond 1e-12")
    return x, y


def runs_required(alpha: float, epsilon: float, p_error: float) -> int:
    """Runs per observable: ceil(2 ln(4/p_error) / (alpha**2 epsilon**2))."""
    return math.ceil(2.0 * math.log(4.0 / p_error) / (alpha * alpha * epsilon * epsilon))


def estimate_trace(u: np.ndarray, alpha: float, epsilon: float, p_error: float,
                   seed: int) -> TraceEstimate:
    """Simulate the repeated-measurement estimate of tr(U)/2**n.

    Runs L = ceil(2 ln(4/p_error) / (alpha*epsilon)**2) independent circuits
    for X and another L for Y.  Each run draws an outcome of +-1 with
    p(+1) = (1 + <X>)/2 (resp. <Y>); the estimate is (mean_X - i mean_Y)/alpha.

    Deterministic given ``seed``: a single Philox stream keyed (seed, 0)
    supplies 2L uniforms, the first L for the X batch, then L for the Y batch.
    """
    u = require_unitary(u)
    if alpha == 0:
        raise ValueError("alpha = 0 carries no trace signal")
    if not abs(alpha) <= 1:
        raise ValueError(f"polarization must satisfy |alpha| <= 1, got {alpha}")
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon must be in (0, 1), got {epsilon}")
    if not 0 < p_error < 1:
        raise ValueError(f"p_error must be in (0, 1), got {p_error}")
    big_n = u.shape[0]
    tr_u = complex(np.trace(u))
    mean_x = alpha * tr_u.real / big_n
    mean_y = -alpha * tr_u.imag / big_n
    runs = runs_required(alpha, epsilon, p_error)
    rng = philox_stream(seed, 0)
    draws_x = rng.uniform(size=runs)
    draws_y = rng.uniform(size=runs)
    outcomes_x = np.where(draws_x < (1 + mean_x) / 2, 1.0, -1.0)
    outcomes_y = np.where(draws_y < (1 + mean_y) / 2, 1.0, -1.0)
    est = complex(outcomes_x.mean(), -outcomes_y.mean()) / alpha
    return TraceEstimate(estimate=est, runs_used=runs, epsilon=epsilon,
                         p_error=p_error, seed=seed)


def separable_decomposition(state: Dqc1State) -> list[tuple[float, np.ndarray, np.ndarray]]:
    """Write the state as a mixture of product states across the (special, rest) cut.

    Diagonalizing U = sum_j e^{i phi_j} |e_j><e_j| gives terms
    (1/2N, |a_j>, |e_j>) and (1/2N, |b_j>, |e_j>) with
    |a_j> = cos(theta)|0> + e^{i phi_j} sin(theta)|1>,
    |b_j> = sin(theta)|0> + e^{i phi_j} cos(theta)|1>, and sin(2 theta) = alpha.
    The weighted mixture reconstructs rho; this is why the special qubit is
    never entangled with the rest, whatever U is.
    """
    big_n = 2**state.n
    theta = math.asin(state.alpha) / 2
    # Schur of a normal matrix gives an orthonormal eigenbasis even when the
    # spectrum is degenerate, which np.linalg.eig does not guarantee
    t, q = schur(state.unitary, output="complex")
    phases = np.diag(t)
    terms = []
    for j in range(big_n):
        e = q[:, j]
        phase = phases[j] / abs(phases[j])
        a = np.array([math.cos(theta), phase * math.sin(theta)], dtype=np.complex128)
        b = np.array([math.sin(theta), phase * math.cos(theta)], dtype=np.complex128)
        terms.append((1.0 / (2 * big_n), a, e))
        terms.append((1.0 / (2 * big_n), b, e))
    return terms


def reconstruct_mixture(terms: list[tuple[float, np.ndarray, np.ndarray]]) -> np.ndarray:
    """Rebuild the density matrix of a product-state mixture."""
    dim0 = len(terms[0][1])
    dim1 = len(terms[0][2])
    rho = np.zeros((dim0 * dim1, dim0 * dim1), dtype=np.complex128)
    for w, a, e in terms:
        vec = np.kron(a, e)
        rho += w * np.outer(vec, vec.conj())
    return rho


def separable_ball_alpha(n: int) -> tuple[float, float]:
    """Polarization thresholds placing the state inside balls around I/2**(n+1).

    Returns (lower, upper): below ``lower`` = 2*3**(-(n+1)/2) the state sits in
    the proven-separable ball; ``upper`` = 2*2**(-(n+1)/2) comes from the known
    family of entangled states bounding the ball radius from above.
    """
    if n < 1:
        raise ValueError("need at least one unpolarized qubit")
    return 2.0 * 3.0 ** (-(n + 1) / 2), 2.0 * 2.0 ** (-(n + 1) / 2)
