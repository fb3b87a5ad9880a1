import math

import numpy as np
import pytest

from conftest import haar_unitary, random_density
from dqc1.family import build_family
from dqc1.linalg import Bipartition, hermitian_eigenvalues, partial_transpose, singular_values
from dqc1.negativity import (negativity_eigen, negativity_singular,
                             pure_state_negativity, unpolarized_partial_transpose)
from dqc1.state import build_state


def bell_density():
    phi = np.zeros(4, dtype=complex)
    phi[0] = phi[3] = 1 / math.sqrt(2)
    return np.outer(phi, phi.conj())


def test_product_state_is_ppt():
    rng = np.random.default_rng(0)
    for k in (1, 2, 3):
        # product across the tested cut
        rho = np.kron(random_density(2 ** (4 - k), rng), random_density(2**k, rng))
        res = negativity_eigen(rho, Bipartition.trailing(4, k))
        assert res.m_value == 1.0 and res.n_value == 0.0 and res.is_ppt


def test_bell_state_saturates_dimension():
    res = negativity_eigen(bell_density(), Bipartition(2, {1}))
    assert abs(res.m_value - 2.0) <= 1e-12
    assert abs(res.m_value - (1 + 2 * res.n_value)) <= 1e-10


def test_family_state_value():
    st = build_state(build_family(2), 1.0)
    res = negativity_eigen(st.rho, Bipartition.trailing(3, 1))
    assert abs(res.m_value - 1.25) <= 1e-12


def test_negativity_eigen_rejects_invalid():
    with pytest.raises(ValueError):
        negativity_eigen(np.eye(4, dtype=complex), Bipartition(2, {1}))


def test_singular_all_unpolarized_gives_one():
    rng = np.random.default_rng(1)
    st = build_state(haar_unitary(8, rng), 1.0)
    res = negativity_singular(st, Bipartition.trailing(4, 3))
    assert abs(res.m_value - 1.0) <= 1e-12


def test_singular_alpha_zero_gives_one():
    rng = np.random.default_rng(2)
    st = build_state(haar_unitary(8, rng), 0.0)
    for k in (1, 2, 3):
        assert negativity_singular(st, Bipartition.trailing(4, k)).m_value == 1.0


def test_negativity_even_in_alpha():
    rng = np.random.default_rng(3)
    u = haar_unitary(8, rng)
    part = Bipartition.trailing(4, 2)
    plus = negativity_singular(build_state(u, 0.7), part).m_value
    minus = negativity_singular(build_state(u, -0.7), part).m_value
    assert abs(plus - minus) <= 1e-12


def test_singular_complement_fallback_warns():
    rng = np.random.default_rng(4)
    st = build_state(haar_unitary(4, rng), 1.0)
    straight = negativity_singular(st, Bipartition.trailing(3, 1))
    with pytest.warns(UserWarning, match="complement"):
        flipped = negativity_singular(st, Bipartition(3, {0, 1}))
    assert abs(straight.m_value - flipped.m_value) <= 1e-12


def test_methods_agree_on_random_states():
    rng = np.random.default_rng(5)
    for _ in range(10):
        n = int(rng.integers(2, 5))
        st = build_state(haar_unitary(2**n, rng), float(rng.uniform(0, 1)))
        for k in range(1, n + 1):
            part = Bipartition.trailing(n + 1, k)
            a = negativity_eigen(st.rho, part).m_value
            b = negativity_singular(st, part).m_value
            assert abs(a - b) <= 1e-9


def test_methods_agree_on_noncontiguous_partition():
    rng = np.random.default_rng(10)
    st = build_state(haar_unitary(8, rng), 1.0)
    part = Bipartition(4, {1, 3})
    a = negativity_eigen(st.rho, part).m_value
    b = negativity_singular(st, part).m_value
    assert abs(a - b) <= 1e-9


def test_transposed_spectrum_structure():
    # spectrum of the transposed state is {(1 +- alpha s_j)/2N}
    rng = np.random.default_rng(6)
    n = 3
    u = haar_unitary(2**n, rng)
    alpha = 0.6
    st = build_state(u, alpha)
    part = Bipartition.trailing(n + 1, 2)
    eigs = hermitian_eigenvalues(partial_transpose(st.rho, part))
    s = singular_values(unpolarized_partial_transpose(st, part))
    predicted = np.sort(np.concatenate([1 + alpha * s, 1 - alpha * s]))[::-1] / 2 ** (n + 1)
    assert np.allclose(eigs, predicted, atol=1e-10)


def test_monotone_in_alpha():
    rng = np.random.default_rng(7)
    u = haar_unitary(8, rng)
    part = Bipartition.trailing(4, 2)
    values = [negativity_eigen(build_state(u, a).rho, part).m_value
              for a in np.linspace(0, 1, 9)]
    assert all(m2 >= m1 - 1e-10 for m1, m2 in zip(values, values[1:]))


def test_local_unitary_invariance():
    rng = np.random.default_rng(8)
    st = build_state(haar_unitary(8, rng), 1.0)
    part = Bipartition.trailing(4, 2)
    base = negativity_eigen(st.rho, part).m_value
    v = np.kron(haar_unitary(4, rng), haar_unitary(4, rng))  # local to the 2|2 cut
    rotated = v @ st.rho @ v.conj().T
    rotated = (rotated + rotated.conj().T) / 2
    assert abs(negativity_eigen(rotated, part).m_value - base) <= 1e-10


def test_block_offdiagonal_trace_powers():
    # C = [[0, Upt^dag], [Upt, 0]] has tr C^2 = 2N and vanishing odd powers
    rng = np.random.default_rng(9)
    for k in (1, 2, 3):
        n = 3
        st = build_state(haar_unitary(2**n, rng), 1.0)
        u_pt = unpolarized_partial_transpose(st, Bipartition.trailing(n + 1, k))
        c = np.block([[np.zeros((8, 8)), u_pt.conj().T], [u_pt, np.zeros((8, 8))]])
        assert abs(np.trace(c)) <= 1e-12
        assert abs(np.trace(c @ c) - 2 * 2**n) <= 1e-10
        assert abs(np.trace(c @ c @ c)) <= 1e-10


def test_pure_state_negativity_values():
    assert pure_state_negativity([1.0, 0.0]) == 1.0
    assert abs(pure_state_negativity([0.5, 0.5]) - 2.0) <= 1e-12
    expected = 1 + math.sqrt(3) / 2
    assert abs(pure_state_negativity([0.75, 0.25]) - expected) <= 1e-12


def test_pure_state_negativity_matches_eigen_route():
    psi = np.zeros(4, dtype=complex)
    psi[0], psi[3] = math.sqrt(0.75), math.sqrt(0.25)
    rho = np.outer(psi, psi.conj())
    direct = negativity_eigen(rho, Bipartition(2, {1})).m_value
    assert abs(direct - pure_state_negativity([0.75, 0.25])) <= 1e-10


def test_pure_state_negativity_rejects_bad_input():
    with pytest.raises(ValueError, match="sum to 1"):
        pure_state_negativity([0.5, 0.4])
    with pytest.raises(ValueError, match="nonnegative"):
        pure_state_negativity([1.5, -0.5])
