# -*- coding: utf-8 *-*
"""Random unitaries and Hermitian spectra

Included functions:

    - haar_unitaries
    - hermitian_spectra
    - conjugate

"""
import numpy as np

from MomentumCheck.errors import InputError

HERMITIAN_TOL = 1e-12


def haar_unitaries(rng, n, size):
    """Haar distributed (size, n, n) unitaries

    QR of a complex Gaussian matrix, with the phases of diag(R) moved into
    Q so that the distribution does not depend on the QR convention.
    """
    Z = (rng.standard_normal((size, n, n)) + 1j * rng.standard_normal((size, n, n))) / np.sqrt(2.0)
    Q, R = np.linalg.qr(Z)
    d = np.diagonal(R, axis1=1, axis2=2)
    phases = d / np.where(np.abs(d) > 0, np.abs(d), 1.0)
    return Q * phases[:, None, :]


def conjugate(U, H):
    """U H U* for stacks of matrices"""
    return np.matmul(np.matmul(U, H), np.conj(np.swapaxes(U, -1, -2)))


def hermitian_spectra(H, check=True):
    """Decreasing eigenvalues of a stack of Hermitian matrices

    Raises:
        InputError: If `check` and some matrix is asymmetric beyond 1e-12
    """
    H = np.asarray(H)
    if H.ndim < 2 or H.shape[-1] != H.shape[-2]:
        raise InputError("expected square matrices, got shape {0}".format(H.shape))
    if check:
        asym = np.abs(H - np.conj(np.swapaxes(H, -1, -2))).max() if H.size else 0.0
        if asym > HERMITIAN_TOL:
            raise InputError("matrix is not Hermitian (asymmetry {0:.3g})".format(asym))
    return np.linalg.eigvalsh(H)[..., ::-1]
