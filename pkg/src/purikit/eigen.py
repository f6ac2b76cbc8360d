"""Eigenvalues of small dense matrices: Hessenberg reduction plus shifted QR.

Works in complex arithmetic throughout, so real matrices with complex
conjugate eigenvalue pairs need no special handling.
"""
import numpy as np


def _scale_down(z, m):
    # complex division by a real would square the divisor and underflow
    return z.real / m + 1j * (z.imag / m)


def hessenberg(a):
    """Householder reduction to upper Hessenberg form (similarity transform)."""
    h = np.array(a, dtype=complex)
    n = h.shape[0]
    for k in range(n - 2):
        x = h[k + 1:, k].copy()
        big = np.abs(x).max()
        if big == 0:
            continue
        # unscaled norms of tiny columns underflow and break orthogonality
        x = _scale_down(x, big)
        alpha = np.linalg.norm(x)
        phase = np.exp(1j * np.angle(x[0]))
        x[0] += phase * alpha
        u = x / np.linalg.norm(x)
        h[k + 1:, :] -= 2 * np.outer(u, u.conj() @ h[k + 1:, :])
        h[:, k + 1:] -= 2 * np.outer(h[:, k + 1:] @ u, u.conj())
        h[k + 2:, k] = 0
    return h


def _givens(a, b):
    # rescale first: subnormal inputs would make the rotation non-unitary
    m = max(abs(a.real), abs(a.imag), abs(b.real), abs(b.imag))
    if m < np.finfo(float).tiny:
        return 1.0, 0.0
    a, b = _scale_down(a, m), _scale_down(b, m)
    r = np.sqrt(abs(a) ** 2 + abs(b) ** 2)
    return a / r, b / r


def _wilkinson_shift(h):
    a, b, c, d = h[0, 0], h[0, 1], h[1, 0], h[1, 1]
    tr, det = a + d, a * d - b * c
    disc = np.sqrt(tr * tr / 4 - det)
    mu1, mu2 = tr / 2 + disc, tr / 2 - disc
    return mu1 if abs(mu1 - d) < abs(mu2 - d) else mu2


def eigenvalues(a, tol=1e-14, max_sweeps=1000):
    """All eigenvalues of a square matrix, unordered.

    Raises
    ------
    RuntimeError
        If an eigenvalue fails to deflate within ``max_sweeps`` QR steps.
    """
    a = np.asarray(a)
    n = a.shape[0]
    scale = np.abs(a).max() if a.size else 0.0
    if scale == 0:
        return np.zeros(n, dtype=complex)
    # work at unit scale so subnormal or huge entries do not under/overflow
    a = a / scale
    a = np.where(np.abs(a) < np.finfo(float).tiny, 0, a)
    h = hessenberg(a)
    eig = np.empty(n, dtype=complex)
    hi = n - 1
    sweeps = 0
    while hi >= 0:
        if hi == 0:
            eig[0] = h[0, 0]
            break
        # find the start of the active unreduced block
        lo = hi
        while lo > 0:
            off = abs(h[lo, lo - 1])
            if off <= tol * (abs(h[lo, lo]) + abs(h[lo - 1, lo - 1])) or off < tol * 1e-3:
                h[lo, lo - 1] = 0
                break
            lo -= 1
        if lo == hi:
            eig[hi] = h[hi, hi]
            hi -= 1
            sweeps = 0
            continue
        sweeps += 1
        if sweeps > max_sweeps:
            raise RuntimeError("QR iteration did not converge")
        if sweeps % 11 == 0:
            mu = h[hi, hi] + abs(h[hi, hi - 1]) * (1 + 0.5j)
        else:
            mu = _wilkinson_shift(h[hi - 1:hi + 1, hi - 1:hi + 1])
        block = h[lo:hi + 1, lo:hi + 1]
        m = block.shape[0]
        block -= mu * np.eye(m)
        rotations = []
        for k in range(m - 1):
            c, s = _givens(block[k, k], block[k + 1, k])
            g = np.array([[np.conj(c), np.conj(s)], [-s, c]])
            block[k:k + 2, k:] = g @ block[k:k + 2, k:]
            rotations.append(g)
        for k, g in enumerate(rotations):
            block[:k + 2, k:k + 2] = block[:k + 2, k:k + 2] @ g.conj().T
        block += mu * np.eye(m)
        h[lo:hi + 1, lo:hi + 1] = block
    return eig * scale


def eigen_magnitudes(a):
    """Eigenvalue magnitudes sorted in descending order."""
    return np.sort(np.abs(eigenvalues(a)))[::-1]
