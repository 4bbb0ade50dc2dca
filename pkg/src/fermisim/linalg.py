"""Dense matrix kernels: determinant, Pfaffian, matrix exponential and the
real skew-symmetric canonical form.

All functions take array-likes and return fresh numpy arrays; inputs are never
modified in place.
"""
from __future__ import annotations

import numpy as np
import scipy.linalg

from .errors import NumericalIntegrityError, ShapeError, ValidationError

SKEW_TOL = 1e-10


def _as_square(a, name="matrix", dtype=None):
    a = np.asarray(a, dtype=dtype)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeError(f"{name} must be square, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NumericalIntegrityError(f"{name} has non-finite entries")
    return a


def check_antisymmetric(a, tol=SKEW_TOL, name="matrix"):
    a = _as_square(a, name)
    if a.size and np.max(np.abs(a + a.T)) > tol:
        raise ValidationError(
            f"{name} is not antisymmetric: max |A + A^T| = {np.max(np.abs(a + a.T)):.3e}"
        )
    return a


def determinant(a) -> complex:
    """Determinant via LAPACK LU with partial pivoting. The 0x0 case is 1."""
    a = _as_square(a)
    if a.shape[0] == 0:
        return 1.0 + 0j
    return complex(np.linalg.det(a.astype(complex)))


def pfaffian(a) -> complex:
    """Pfaffian of an antisymmetric matrix.

    Skew-symmetric Parlett-Reid elimination (A = L T L^T with partial
    pivoting), O(m^3). Odd dimension gives exactly 0, the empty matrix 1.
    """
    a = check_antisymmetric(a)
    m = a.shape[0]
    if m == 0:
        return 1.0 + 0j
    if m % 2:
        return 0j
    a = np.array(a, dtype=complex)
    pf = 1.0 + 0j
    for k in range(0, m - 1, 2):
        # pivot: largest entry in row k right of the diagonal
        kp = k + 1 + int(np.argmax(np.abs(a[k, k + 1:])))
        if kp != k + 1:
            a[[k + 1, kp], :] = a[[kp, k + 1], :]
            a[:, [k + 1, kp]] = a[:, [kp, k + 1]]
            pf = -pf
        piv = a[k, k + 1]
        if piv == 0:
            return 0j
        pf *= piv
        if k + 2 < m:
            upd = np.outer(a[k, k + 2:] / piv, a[k + 2:, k + 1])
            # form the antisymmetric part explicitly; complex outer products
            # are not bitwise symmetric under transposition
            a[k + 2:, k + 2:] += upd - upd.T
    return complex(pf)


# Pade approximant tables for scaling and squaring (Higham 2005).
_PADE = {
    3: (120.0, 60.0, 12.0, 1.0),
    5: (30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0),
    7: (17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0),
    9: (17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
        2162160.0, 110880.0, 3960.0, 90.0, 1.0),
    13: (64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
         1187353796428800.0, 129060195264000.0, 10559470521600.0,
         670442572800.0, 33522128640.0, 1323241920.0, 40840800.0, 960960.0,
         16380.0, 182.0, 1.0),
}
_THETA = {3: 1.495585217958292e-2, 5: 2.539398330063230e-1,
          7: 9.504178996162932e-1, 9: 2.097847961257068, 13: 5.371920351148152}


def _pade_uv(a, m):
    b = _PADE[m]
    ident = np.eye(a.shape[0], dtype=a.dtype)
    if m < 13:
        powers = [ident, a @ a]
        for _ in range(2, m // 2 + 1):
            powers.append(powers[-1] @ powers[1])
        u = sum(b[2 * j + 1] * powers[j] for j in range(m // 2 + 1))
        u = a @ u
        v = sum(b[2 * j] * powers[j] for j in range(m // 2 + 1))
        return u, v
    a2 = a @ a
    a4 = a2 @ a2
    a6 = a4 @ a2
    u = a @ (a6 @ (b[13] * a6 + b[11] * a4 + b[9] * a2)
             + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident)
    v = (a6 @ (b[12] * a6 + b[10] * a4 + b[8] * a2)
         + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident)
    return u, v


def matrix_exponential(a) -> np.ndarray:
    """exp(A) by scaling and squaring with a diagonal Pade approximant.

    Degree and scaling follow the 1-norm thresholds of Higham's algorithm,
    which bound the backward error by unit roundoff.
    """
    a = _as_square(a)
    n = a.shape[0]
    if not np.iscomplexobj(a):
        a = a.astype(float)
    if n == 0:
        return a.copy()
    norm = np.linalg.norm(a, 1)
    s = 0
    for m in (3, 5, 7, 9):
        if norm <= _THETA[m]:
            break
    else:
        m = 13
        if norm > _THETA[13]:
            s = int(np.ceil(np.log2(norm / _THETA[13])))
    scaled = a / (2.0 ** s)
    u, v = _pade_uv(scaled, m)
    r = np.linalg.solve(v - u, v + u)
    for _ in range(s):
        r = r @ r
    return r


def skew_canonical_form(alpha):
    """Canonical form of a real antisymmetric 2n x 2n matrix.

    Returns (W, eps) with W orthogonal such that W @ alpha @ W.T is
    block diagonal with blocks [[0, eps_j], [-eps_j, 0]] and eps_j >= 0.
    """
    alpha = check_antisymmetric(np.asarray(alpha, dtype=float), name="alpha")
    dim = alpha.shape[0]
    if dim % 2:
        raise ShapeError(f"alpha must have even dimension, got {dim}")
    if dim == 0:
        return np.zeros((0, 0)), np.zeros(0)
    # alpha is normal, so its real Schur form is block diagonal.
    s, z = scipy.linalg.schur(alpha, output="real")
    rows = []
    eps = []
    zero_rows = []
    k = 0
    while k < dim:
        if k + 1 < dim and abs(s[k + 1, k]) > 0.0:
            e = s[k, k + 1]
            r0, r1 = z[:, k], z[:, k + 1]
            if e < 0:
                r1 = -r1
                e = -e
            rows.extend([r0, r1])
            eps.append(e)
            k += 2
        else:
            zero_rows.append(z[:, k])
            k += 1
    # 1x1 Schur blocks are zero eigenvalues; pair them into eps = 0 blocks.
    if len(zero_rows) % 2:
        raise NumericalIntegrityError("odd number of zero modes in canonical form")
    for j in range(0, len(zero_rows), 2):
        rows.extend([zero_rows[j], zero_rows[j + 1]])
        eps.append(0.0)
    w = np.array(rows)
    return w, np.array(eps, dtype=float)


def block_matrix(eps) -> np.ndarray:
    """The 2x2-block skew matrix with blocks [[0, e], [-e, 0]]."""
    eps = np.asarray(eps, dtype=float)
    d = np.zeros((2 * len(eps), 2 * len(eps)))
    for j, e in enumerate(eps):
        d[2 * j, 2 * j + 1] = e
        d[2 * j + 1, 2 * j] = -e
    return d
