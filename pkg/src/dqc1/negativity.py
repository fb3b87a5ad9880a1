"""Multiplicative negativity of bipartite states.

M(rho) = tr|rho^PT| is 1 for every PPT state and grows up to d (the smaller
part dimension) for maximally entangled pure states; N(rho), the magnitude of
the sum of negative partial-transpose eigenvalues, satisfies M = 1 + 2N.
A value of 1 certifies PPT only: bound entangled states are PPT too, so M = 1
must never be read as "separable".
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .linalg import (Bipartition, hermitian_eigenvalues, partial_transpose,
                     require_density, singular_values)
from .state import Dqc1State

# eigenvalues this close below zero are rounding noise, not entanglement
NEGATIVE_EIGENVALUE_CUTOFF = 1e-12


@dataclass(frozen=True)
class NegativityResult:
    m_value: float
    n_value: float
    partition: Bipartition
    method: str  # "eigen" or "singular"

    @property
    def is_ppt(self) -> bool:
        return self.n_value == 0.0


def negativity_eigen(rho: np.ndarray, part: Bipartition) -> NegativityResult:
    """M and N from the eigenvalues of the partial transpose of ``rho``."""
    rho = require_density(rho)
    lam = hermitian_eigenvalues(partial_transpose(rho, part))
    neg = lam[lam < -NEGATIVE_EIGENVALUE_CUTOFF]
    n_value = float(-neg.sum()) if neg.size else 0.0
    return NegativityResult(m_value=1.0 + 2.0 * n_value, n_value=n_value,
                            partition=part, method="eigen")


def unpolarized_partial_transpose(state: Dqc1State, part: Bipartition) -> np.ndarray:
    """Partial transpose of U over the unpolarized qubits named by ``part``.

    ``part`` divides the full register; register qubit q >= 1 is qubit q - 1
    of U.  The transposed part must not contain the special qubit.
    """
    if 0 in part.transposed_part:
        raise ValueError("transposed part must avoid the special qubit")
    shifted = frozenset(q - 1 for q in part.transposed_part)
    if len(shifted) == state.n:
        return state.unitary.T  # every unpolarized qubit: a plain transpose
    return partial_transpose(state.unitary, Bipartition(state.n, shifted))


def negativity_singular(state: Dqc1State, part: Bipartition) -> NegativityResult:
    """M via the singular values of the partially transposed unitary.

    With the transpose on the side away from the special qubit, the spectrum of
    the transposed state is {(1 +- alpha s_j)/2N} over the singular values s_j
    of the transposed unitary, so M = (1/N) sum_j max(|alpha| s_j, 1).  If the
    requested part contains qubit 0, the complement is used instead (the two
    partial transposes share eigenvalues and singular values).
    """
    if part.total_qubits != state.total_qubits:
        raise ValueError(f"bipartition is over {part.total_qubits} qubits, "
                         f"state has {state.total_qubits}")
    effective = part
    if 0 in part.transposed_part:
        effective = part.complement()
        warnings.warn("transposed part contains the special qubit; "
                      "using the complement, which has the same spectrum",
                      stacklevel=2)
    u_pt = unpolarized_partial_transpose(state, effective)
    s = singular_values(u_pt)
    big_n = 2**state.n
    m_value = float(np.maximum(abs(state.alpha) * s, 1.0).sum() / big_n)
    return NegativityResult(m_value=m_value, n_value=(m_value - 1.0) / 2.0,
                            partition=part, method="singular")


def pure_state_negativity(schmidt: np.ndarray) -> float:
    """M of a bipartite pure state from its Schmidt coefficients mu_j.

    Equals (sum_j sqrt(mu_j))**2, which is bounded by the number of nonzero
    coefficients and saturates it exactly for the maximally entangled state.
    """
    mu = np.asarray(schmidt, dtype=float)
    if mu.size == 0 or np.any(mu < 0):
        raise ValueError("Schmidt coefficients must be nonnegative")
    if abs(mu.sum() - 1.0) > 1e-12:
        raise ValueError(f"Schmidt coefficients must sum to 1, got {mu.sum():.15g}")
    return float(np.sqrt(mu).sum() ** 2)
