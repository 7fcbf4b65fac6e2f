"""Independent reference implementations used to cross-check the library.

Nothing here imports from gatecap, so agreement between the two sides is
meaningful.  Everything is written for clarity over speed.
"""

import numpy as np


def jacobi_eigenvalues(h, tol=1e-13, max_sweeps=100):
    """Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations.

    Each rotation is an exact unitary similarity, so the diagonal converges
    to the spectrum no matter how the pivots are ordered; we iterate sweeps
    until the largest off-diagonal magnitude is below tol * scale.  Returns
    eigenvalues sorted descending.
    """
    a = np.array(h, dtype=np.complex128)
    n = a.shape[0]
    scale = max(np.abs(a).max(), 1.0)
    for _ in range(max_sweeps):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = a[p, q]
                if abs(b) <= tol * scale:
                    continue
                off = max(off, abs(b))
                beta = np.angle(b)
                # 2x2 block [[app, |b|], [|b|, aqq]] after phasing away beta
                tau = (a[q, q].real - a[p, p].real) / (2.0 * abs(b))
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                g = np.eye(n, dtype=np.complex128)
                g[p, p] = c
                g[p, q] = s
                g[q, p] = -s * np.exp(-1j * beta)
                g[q, q] = c * np.exp(-1j * beta)
                a = g.conj().T @ a @ g
        if off <= tol * scale:
            break
    else:
        raise RuntimeError("Jacobi sweep did not converge")
    return np.sort(a.diagonal().real)[::-1]


def schmidt_squares(amplitudes, d_a, d_b):
    """Squared Schmidt coefficients of a bipartite pure state via SVD."""
    m = np.asarray(amplitudes, dtype=np.complex128).reshape(d_a, d_b)
    sv = np.linalg.svd(m, compute_uv=False)
    return sv * sv


def shannon_bits(probs):
    """Shannon entropy of a probability vector in bits, 0 log 0 = 0."""
    total = 0.0
    for p in probs:
        if p > 0.0:
            total -= p * np.log2(p)
    return total


def holevo_bits(probs, rhos):
    """Holevo quantity chi = S(sum p rho) - sum p S(rho), all in bits."""
    avg = sum(p * r for p, r in zip(probs, rhos))
    chi = shannon_bits(np.linalg.eigvalsh(avg))
    for p, r in zip(probs, rhos):
        chi -= p * shannon_bits(np.linalg.eigvalsh(r))
    return chi
