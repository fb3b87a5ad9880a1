"""A block-structured unitary family with analytically known negativity.

The n-qubit member is built from four single-qubit blocks A, B, C, D as

    U_n = [[I_(n-2) x A,  X_(n-2) x C],
           [X_(n-2) x D,  I_(n-2) x B]],

i.e. the first qubit selects the block row, the middle n-2 qubits carry
identity or all-X factors, and the last qubit carries the block.  Because I
and X are transposition invariant, only qubits 1 and n of the register react
to a partial transpose, and the output-state negativity collapses to the
three-qubit case whatever n is.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import Bipartition, as_complex_matrix, max_abs, require_unitary
from .pathsum import CNOT, GateCircuit, H, T, Gate

BLOCK_IDENTITY_TOL = 1e-12

_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)


@dataclass(frozen=True)
class U2Blocks:
    """The four equal-size blocks of a seed unitary [[a, c], [d, b]]."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray

    def __post_init__(self):
        blocks = [as_complex_matrix(m) for m in (self.a, self.b, self.c, self.d)]
        for name, m in zip("abcd", blocks):
            object.__setattr__(self, name, m)
            if m.shape != blocks[0].shape:
                raise ValueError("blocks must share one shape")
        a, b, c, d = blocks
        eye = np.eye(a.shape[0])
        defects = (max_abs(a.conj().T @ a + d.conj().T @ d - eye),
                   max_abs(b.conj().T @ b + c.conj().T @ c - eye),
                   max_abs(a.conj().T @ c + d.conj().T @ b))
        if max(defects) > BLOCK_IDENTITY_TOL:
            raise ValueError(f"blocks do not assemble to a unitary (defects {defects})")

    @property
    def dim(self) -> int:
        return self.a.shape[0]

    def matrix(self) -> np.ndarray:
        """Assemble the seed unitary [[a, c], [d, b]]."""
        return np.block([[self.a, self.c], [self.d, self.b]])


def canonical_u2() -> U2Blocks:
    """The 0/1 block choice whose seed unitary swaps |00> and |11>."""
    return U2Blocks(a=np.array([[0, 0], [0, 1]], dtype=np.complex128),
                    b=np.array([[1, 0], [0, 0]], dtype=np.complex128),
                    c=np.array([[0, 1], [0, 0]], dtype=np.complex128),
                    d=np.array([[0, 0], [1, 0]], dtype=np.complex128))


def build_family(n: int, blocks: U2Blocks | None = None) -> np.ndarray:
    """The n-qubit family unitary for the given seed blocks.

    With 2x2 blocks this is the canonical family (n >= 2, reducing to the seed
    at n = 2).  Blocks of dimension 2**(k-1) give the k-qubit-seed
    generalization, whose negativity is a numerical matter only.
    """
    if blocks is None:
        blocks = canonical_u2()
    seed_qubits = blocks.dim.bit_length()  # k: block dim 2**(k-1)
    if 2**(seed_qubits - 1) != blocks.dim:
        raise ValueError(f"block dimension {blocks.dim} is not a power of 2")
    if n < seed_qubits:
        raise ValueError(f"family needs n >= {seed_qubits} for these blocks, got {n}")
    middle = n - seed_qubits
    eye_m = np.eye(2**middle, dtype=np.complex128)
    x_m = np.eye(1, dtype=np.complex128)
    for _ in range(middle):
        x_m = np.kron(x_m, _X)
    u = np.block([[np.kron(eye_m, blocks.a), np.kron(x_m, blocks.c)],
                  [np.kron(x_m, blocks.d), np.kron(eye_m, blocks.b)]])
    return require_unitary(u)


def _u2_gates(q1: int, qn: int) -> tuple[Gate, ...]:
    """The canonical seed (swap |00> <-> |11|) on qubits (q1, qn) in primitive
    gates: conjugate an anti-controlled NOT by CNOT(q1 -> qn), with X = H T^4 H."""
    x_qn = (H(qn), T(qn), T(qn), T(qn), T(qn), H(qn))
    return (CNOT(q1, qn), *x_qn, CNOT(qn, q1), *x_qn, CNOT(q1, qn))


def circuit_family(n: int) -> GateCircuit:
    """Gate realization of the canonical family member on n qubits.

    Circuit qubit q corresponds to register qubit q + 1.  The seed acts on
    qubits (0, n-1), bracketed by CNOTs from qubit 0 to each middle qubit.
    """
    if n < 2:
        raise ValueError(f"family needs n >= 2, got {n}")
    fan_out = tuple(CNOT(0, q) for q in range(1, n - 1))
    return GateCircuit(n, fan_out + _u2_gates(0, n - 1) + tuple(reversed(fan_out)))


def qubits_1_and_n_together(n: int, part: Bipartition) -> bool:
    """Whether register qubits 1 and n land in the same side of the division."""
    if part.total_qubits != n + 1:
        raise ValueError(f"bipartition is over {part.total_qubits} qubits, expected {n + 1}")
    return (1 in part.transposed_part) == (n in part.transposed_part)


def family_negativity(n: int, alpha: float, part: Bipartition) -> float:
    """Closed-form negativity of the canonical family's output state.

    Divisions grouping register qubits 1 and n give 1; divisions separating
    them give max(1, (2 alpha + 3)/4), independent of n.
    """
    if n < 2:
        raise ValueError(f"family needs n >= 2, got {n}")
    if not 0 <= alpha <= 1:
        raise ValueError(f"alpha must be in [0, 1], got {alpha}")
    if qubits_1_and_n_together(n, part):
        return 1.0
    return max(1.0, (2.0 * alpha + 3.0) / 4.0)
