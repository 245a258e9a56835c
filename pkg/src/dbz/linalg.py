"""Cyclic Jacobi eigenvalues for small complex Hermitian matrices."""

from __future__ import annotations

import cmath
import math

import numpy as np


def jacobi_eigenvalues(a, rel_tol: float = 1e-14, max_sweeps: int = 60) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix, ascending.

    Each rotation first removes the phase of the pivot ``a[p, q]`` with a
    diagonal unitary, then annihilates it with a real Givens rotation.
    Sweeps stop once the off-diagonal Frobenius norm falls below
    ``rel_tol`` times the full norm.
    """
    a = np.array(a, dtype=np.complex128)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix must be square")
    if n == 0:
        return np.zeros(0)
    total = np.linalg.norm(a)
    if total == 0.0:
        return np.zeros(n)
    for _ in range(max_sweeps):
        off = math.sqrt(max(np.linalg.norm(a) ** 2 - np.sum(np.abs(np.diag(a)) ** 2), 0.0))
        if off <= rel_tol * total:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = complex(a[p, q])
                mag = abs(apq)
                if mag <= 1e-300 * total:
                    a[p, q] = a[q, p] = 0.0
                    continue
                # apq / mag can overflow for subnormal pivots
                phase = cmath.exp(1j * cmath.phase(apq))
                theta = 0.5 * math.atan2(2.0 * mag, (a[q, q] - a[p, p]).real)
                c, s = math.cos(theta), math.sin(theta)
                # J = diag(1, conj(phase)) @ [[c, s], [-s, c]] acting on (p, q)
                j = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                cols = a[:, [p, q]] @ j
                a[:, p], a[:, q] = cols[:, 0], cols[:, 1]
                rows = j.conj().T @ a[[p, q], :]
                a[p, :], a[q, :] = rows[0], rows[1]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
    return np.sort(np.diag(a).real)
