import numpy as np
import pytest

from rdmt.algebra import (
    AlgebraTag,
    DivMatrix,
    HermitianPD,
    _conj_t_raw,
    _hermitize_raw,
    _identity_raw,
    _matmul_raw,
)


def random_matrix(rng, tag, m, n, scale=1.0):
    return DivMatrix(tag, scale * rng.normal(size=(m, n, AlgebraTag(tag).beta)))


def random_hpd(rng, tag, m, boost=None):
    """Well-conditioned random Hermitian positive definite matrix."""
    beta = AlgebraTag(tag).beta
    g = rng.normal(size=(m, m, beta))
    if boost is None:
        boost = 0.5 + 0.5 * m
    a = _matmul_raw(g, _conj_t_raw(g)) + boost * _identity_raw(m, beta)
    return HermitianPD(DivMatrix(tag, _hermitize_raw(a)))


def random_unitary(rng, tag, m):
    """Random unitary matrix over the algebra via modified Gram-Schmidt."""
    from rdmt.algebra import _conj_coeffs, _mul_coeffs

    beta = AlgebraTag(tag).beta
    g = rng.normal(size=(m, m, beta))
    q = np.zeros_like(g)
    for j in range(m):
        v = g[:, j, :].copy()
        for k in range(j):
            # coefficient <q_k, v> = sum_i conj(q_ik) v_i
            coef = _mul_coeffs(_conj_coeffs(q[:, k, :]), v).sum(axis=0)
            v -= _mul_coeffs(q[:, k, :], np.broadcast_to(coef, q[:, k, :].shape))
        v /= np.sqrt(np.square(v).sum())
        q[:, j, :] = v
    return DivMatrix(tag, q)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
