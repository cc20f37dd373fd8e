"""Small complex linear-algebra kernel.

Everything here works on dense matrices of size at most a few tens, so
clarity wins over blocking. All logarithms are base 2.
"""

import warnings

import numpy as np
import scipy.linalg

from .errors import NonPositiveDefinite, NotHermitian, Singular, ZeroDirection

HERMITIAN_RTOL = 1e-12
PIVOT_FLOOR = 1e-14


def _as_matrix(M):
    M = np.asarray(M, dtype=complex)
    if M.ndim == 0:
        M = M.reshape(1, 1)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    return M


def hermitian_part(M):
    """Return (M + M^H)/2 after checking that M is Hermitian to tolerance.

    Raises
    ------
    NotHermitian
        If ``max|M - M^H| > 1e-12 * max|M|``.
    """
    M = _as_matrix(M)
    scale = np.max(np.abs(M)) if M.size else 0.0
    if np.max(np.abs(M - M.conj().T), initial=0.0) > HERMITIAN_RTOL * scale:
        raise NotHermitian("matrix is not Hermitian within tolerance")
    return 0.5 * (M + M.conj().T)


def logdet_hermitian(M):
    """log2 det(M) for a Hermitian positive-definite matrix.

    Cholesky is tried first. If it breaks down, a Bunch-Kaufman pivoted
    LDL^H factorization decides definiteness and supplies the determinant.

    Parameters
    ----------
    M : array_like, shape (n, n)

    Returns
    -------
    float
        ``log2 det(M)`` in bits.
    """
    M = hermitian_part(M)
    if M.shape[0] == 0:
        return 0.0
    try:
        L = np.linalg.cholesky(M)
        d = np.real(np.diag(L)) ** 2
        if np.any(d <= PIVOT_FLOOR):
            raise NonPositiveDefinite("Cholesky pivot below floor")
        return float(np.sum(np.log2(d)))
    except np.linalg.LinAlgError:
        pass
    # Pivoted LDL^H exposes the inertia, which a plain LU determinant does not.
    _, D, _ = scipy.linalg.ldl(M, lower=True, hermitian=True)
    off = np.abs(np.diag(D, -1))
    d = np.real(np.diag(D))
    if np.any(off > 0) or np.any(d <= PIVOT_FLOOR):
        raise NonPositiveDefinite("matrix is not positive definite")
    return float(np.sum(np.log2(d)))


def _graded_qr(A):
    """Pivoted QR of A[order] with R split as diag(s) T, |T| <= 1 entrywise.

    Rows are sorted largest first and columns pivoted, which keeps the
    factorization accurate for row- and column-graded A. Pivoting makes
    |r_ii| dominate the rest of row i, so dividing each row by
    max(|r_ii|, 1) leaves a factor with bounded entries.
    """
    order = np.argsort(-np.linalg.norm(A, axis=1), kind="stable")
    Q, R, _ = scipy.linalg.qr(A[order], mode="full", pivoting=True)
    k = min(A.shape)
    s = np.maximum(np.abs(np.diag(R)[:k]), 1.0)
    return order, Q, s, R[:k] / s[:, None]


def _columns(A):
    A = np.asarray(A, dtype=complex)
    return A[:, None] if A.ndim == 1 else A


def logdet_eye_plus(A):
    """log2 det(I + A A^H) from the columns of A.

    Parameters
    ----------
    A : array_like, shape (n, m)
        Column k is ``sqrt(p_k) h_k``, so the result equals
        ``log2 det(I + sum_k p_k h_k h_k^H)``.

    Notes
    -----
    With A P = Q diag(s) T, ``I + A A^H`` has the determinant of
    ``diag(s) (diag(s)^-2 + T T^H) diag(s)``. The middle factor is well
    conditioned whatever the spread of column powers, so results stay
    accurate for powers far beyond 2^60 where forming A A^H does not.
    """
    A = _columns(A)
    if A.shape[1] == 0 or A.shape[0] == 0:
        return 0.0
    _, _, s, T = _graded_qr(A)
    M = np.diag(s ** -2.0) + T @ T.conj().T
    return float(2.0 * np.sum(np.log2(s)) + logdet_hermitian(M))


def whiten_against(A, W):
    """Return C = F^{-1} A for some F with F F^H = I + W W^H.

    Then ``det(I + C C^H) = det(I + W W^H + A A^H) / det(I + W W^H)``;
    F is built from the graded QR of W and never formed.
    """
    A, W = _columns(A), _columns(W)
    if W.shape[1] == 0:
        return A.copy()
    order, Q, s, T = _graded_qr(W)
    L = np.linalg.cholesky(np.diag(s ** -2.0) + T @ T.conj().T)
    Y = Q.conj().T @ A[order]
    k = len(s)
    Y[:k] = scipy.linalg.solve_triangular(L, Y[:k] / s[:, None], lower=True)
    return Y


def whiten_columns(A, B):
    """Return C with C C^H = A (I + B^H B)^{-1} A^H.

    This is the reduced form of a conditional covariance term, evaluated
    without inverting anything explicitly.
    """
    A, B = _columns(A), _columns(B)
    return whiten_against(A.conj().T, B.conj().T).conj().T


def _checked_inverse(M, what):
    M = _as_matrix(M)
    with warnings.catch_warnings():
        # singularity is reported below as an exception instead
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(M, check_finite=False)
    if np.any(np.abs(np.diag(lu)) <= PIVOT_FLOOR * max(1.0, np.max(np.abs(M)))):
        raise Singular(f"{what} is singular to working precision")
    return scipy.linalg.lu_solve((lu, piv), np.eye(M.shape[0], dtype=complex))


def woodbury_inverse(A, B, C, D):
    """Inverse of A + B C D through the Woodbury identity.

    Returns ``A^-1 - A^-1 B (C^-1 + D A^-1 B)^-1 D A^-1``.

    Raises
    ------
    Singular
        If A, C or the capacitance matrix cannot be inverted.
    """
    A = _as_matrix(A)
    C = _as_matrix(C)
    B = np.asarray(B, dtype=complex).reshape(A.shape[0], C.shape[0])
    D = np.asarray(D, dtype=complex).reshape(C.shape[0], A.shape[0])
    Ai = _checked_inverse(A, "A")
    Ci = _checked_inverse(C, "C")
    cap = _checked_inverse(Ci + D @ Ai @ B, "capacitance matrix")
    return Ai - Ai @ B @ cap @ D @ Ai


def project_out(x, u):
    """Remove the component of x along u.

    Returns
    -------
    gain : float
        Norm of the residual, i.e. ``sqrt(1 - |c|^2) * ||x||`` with ``c``
        the normalized inner product of x and u.
    residual : ndarray
        Component of x orthogonal to u.
    """
    x = np.asarray(x, dtype=complex).ravel()
    u = np.asarray(u, dtype=complex).ravel()
    nu = np.linalg.norm(u)
    if nu == 0:
        raise ZeroDirection("projection direction has zero norm")
    e = u / nu
    residual = x - e * np.vdot(e, x)
    return float(np.linalg.norm(residual)), residual
