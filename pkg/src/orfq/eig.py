"""Dense complex eigensolver.

Householder reduction to Hessenberg form, single-shift implicit QR with
Wilkinson shifts to reach a complex Schur form, eigenvectors by triangular
back substitution, and polynomial roots through balanced companion matrices.
"""

from __future__ import annotations

import numpy as np

from .errors import BadSpec, DefectiveCluster, DegenerateLeading, NoConvergence

EPS = np.finfo(float).eps
CLUSTER_TOL = 1e-8


def _square(M) -> np.ndarray:
    A = np.array(M, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise BadSpec("matrix must be square")
    if not np.all(np.isfinite(A)):
        raise BadSpec("matrix has non-finite entries")
    return A


def hessenberg_reduce(M):
    """Return ``(H, Q)`` with ``H`` upper Hessenberg, ``Q`` unitary and ``M = Q H Q^H``."""
    A = _square(M)
    n = A.shape[0]
    Q = np.eye(n, dtype=complex)
    for k in range(n - 2):
        x = A[k + 1:, k].copy()
        if not np.any(x[1:]):
            continue
        alpha = np.linalg.norm(x)
        ph = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        v = x
        v[0] += ph * alpha
        v /= np.linalg.norm(v)
        A[k + 1:, :] -= 2.0 * np.outer(v, v.conj() @ A[k + 1:, :])
        A[:, k + 1:] -= 2.0 * np.outer(A[:, k + 1:] @ v, v.conj())
        Q[:, k + 1:] -= 2.0 * np.outer(Q[:, k + 1:] @ v, v.conj())
        A[k + 2:, k] = 0.0
    return A, Q


def _givens(x: complex, y: complex):
    """``c`` real and ``s`` complex with ``[[c, s], [-conj(s), c]] @ [x, y] = [r, 0]``."""
    if y == 0:
        return 1.0, 0j
    if x == 0:
        return 0.0, 1.0 + 0j
    ax = abs(x)
    r = np.hypot(ax, abs(y))
    return ax / r, (x / ax) * np.conj(y) / r


def _wilkinson(a, b, c, d) -> complex:
    """Eigenvalue of ``[[a, b], [c, d]]`` closest to ``d``."""
    h = 0.5 * (a - d)
    disc = np.sqrt(h * h + b * c)
    den = h + disc if abs(h + disc) >= abs(h - disc) else h - disc
    if den == 0:
        return d
    return d - b * c / den


def schur(M):
    """Complex Schur form: ``(T, Q, eigenvalues)`` with ``M = Q T Q^H``."""
    H, Q = hessenberg_reduce(M)
    n = H.shape[0]
    if n == 0:
        return H, Q, np.zeros(0, dtype=complex)
    hnorm = np.linalg.norm(H)
    hi = n - 1
    its = 0
    sweeps = 0
    max_sweeps = 40 * n
    while hi > 0:
        l = hi
        while l > 0:
            sub = abs(H[l, l - 1])
            tol = EPS * (abs(H[l - 1, l - 1]) + abs(H[l, l]))
            if tol == 0:
                tol = EPS * hnorm
            if sub <= tol:
                H[l, l - 1] = 0.0
                break
            l -= 1
        if l == hi:
            hi -= 1
            its = 0
            continue
        sweeps += 1
        its += 1
        if sweeps > max_sweeps:
            raise NoConvergence(f"QR iteration did not converge within {max_sweeps} sweeps")
        if its % 10 == 0:
            mu = H[hi, hi] + 0.75 * abs(H[hi, hi - 1]) + 0.4375j * abs(H[hi - 1, hi - 2] if hi - 2 >= l else 1.0)
        else:
            mu = _wilkinson(H[hi - 1, hi - 1], H[hi - 1, hi], H[hi, hi - 1], H[hi, hi])
        x = H[l, l] - mu
        y = H[l + 1, l]
        for k in range(l, hi):
            if k > l:
                x = H[k, k - 1]
                y = H[k + 1, k - 1]
            c, s = _givens(x, y)
            G = np.array([[c, s], [-np.conj(s), c]])
            Gh = G.conj().T
            j0 = l if k == l else k - 1
            H[k:k + 2, j0:] = G @ H[k:k + 2, j0:]
            i1 = min(k + 3, hi + 1)
            H[:i1, k:k + 2] = H[:i1, k:k + 2] @ Gh
            Q[:, k:k + 2] = Q[:, k:k + 2] @ Gh
            if k > l:
                H[k + 1, k - 1] = 0.0
    T = np.triu(H)
    return T, Q, np.diag(T).copy()


def eigvals(M) -> np.ndarray:
    return schur(M)[2]


def det(M) -> complex:
    """Determinant as the product of the Schur diagonal."""
    A = _square(M)
    if A.shape[0] == 0:
        return 1.0 + 0j
    return complex(np.prod(schur(A)[2]))


def is_normal(M, tol: float = 1e-10) -> bool:
    A = np.asarray(M, dtype=complex)
    scale = max(np.linalg.norm(A) ** 2, 1e-300)
    return np.linalg.norm(A.conj().T @ A - A @ A.conj().T) <= tol * scale


def _orthonormalize(V: np.ndarray) -> np.ndarray:
    """Modified Gram-Schmidt with one reorthogonalisation pass."""
    V = V.copy()
    for j in range(V.shape[1]):
        for _ in range(2):
            for i in range(j):
                V[:, j] -= (V[:, i].conj() @ V[:, j]) * V[:, i]
        V[:, j] /= np.linalg.norm(V[:, j])
    return V


def _fix_phase(v: np.ndarray) -> np.ndarray:
    big = np.max(np.abs(v))
    for x in v:
        if abs(x) > 1e-12 * big:
            return v * (abs(x) / x)
    return v


def _clusters(w: np.ndarray) -> list:
    n = len(w)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(w[i] - w[j]) < CLUSTER_TOL:
                parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _schur_vectors(T: np.ndarray, Q: np.ndarray) -> np.ndarray:
    """Eigenvectors of ``Q T Q^H`` ordered like ``diag(T)``."""
    n = T.shape[0]
    tnorm = max(np.linalg.norm(T), 1e-300)
    small = EPS * tnorm
    Y = np.zeros((n, n), dtype=complex)
    for i in range(n):
        lam = T[i, i]
        y = np.zeros(n, dtype=complex)
        y[i] = 1.0
        for j in range(i - 1, -1, -1):
            d = T[j, j] - lam
            if abs(d) < small:
                d = small
            y[j] = -(T[j, j + 1:i + 1] @ y[j + 1:i + 1]) / d
        Y[:, i] = y
    V = Q @ Y
    return V / np.linalg.norm(V, axis=0)


def eig(M):
    """Eigenvalues and unit-norm eigenvectors (columns), via the Schur form.

    For normal input the eigenvector matrix is orthonormal; near-equal
    eigenvalues (closer than ``1e-8``) are treated as a cluster and their
    vectors re-orthonormalised.  Non-normal input with a cluster whose
    computed vectors are nearly dependent raises :class:`DefectiveCluster`.
    """
    A = _square(M)
    T, Q, w = schur(A)
    V = _schur_vectors(T, Q)
    normal = is_normal(A)
    for group in _clusters(w):
        if len(group) < 2:
            continue
        if normal:
            V[:, group] = _orthonormalize(V[:, group])
        else:
            sv = np.linalg.svd(V[:, group], compute_uv=False)
            if sv[-1] < 1e-6:
                raise DefectiveCluster("near-defective eigenvalue cluster in a non-normal matrix")
    for j in range(V.shape[1]):
        V[:, j] = _fix_phase(V[:, j])
    return w, V


def eigenvectors(M, eigenvalues) -> np.ndarray:
    """Eigenvectors aligned with the given eigenvalues (as returned by :func:`schur`)."""
    w, V = eig(M)
    target = np.asarray(eigenvalues, dtype=complex)
    used = np.zeros(len(w), dtype=bool)
    out = np.zeros((V.shape[0], len(target)), dtype=complex)
    for k, lam in enumerate(target):
        d = np.abs(w - lam)
        d[used] = np.inf
        i = int(np.argmin(d))
        used[i] = True
        out[:, k] = V[:, i]
    return out


def balance(A: np.ndarray) -> np.ndarray:
    """Diagonal similarity scaling by powers of two (Parlett-Reinsch)."""
    A = A.copy()
    n = A.shape[0]
    radix, sqrdx = 2.0, 4.0
    off = ~np.eye(n, dtype=bool)
    done = False
    while not done:
        done = True
        for i in range(n):
            # off-diagonal sums taken directly; subtracting the diagonal can leave a negative residue
            c = float(np.sum(np.abs(A[off[:, i], i])))
            r = float(np.sum(np.abs(A[i, off[i, :]])))
            if c == 0 or r == 0 or not np.isfinite(c + r):
                continue
            g = r / radix
            f = 1.0
            s = c + r
            while c < g:
                f *= radix
                c *= sqrdx
            g = r * radix
            while c > g:
                f /= radix
                c /= sqrdx
            if (c + r) / f < 0.95 * s:
                done = False
                A[i, :] /= f
                A[:, i] *= f
    return A


def companion(coeffs) -> np.ndarray:
    """Upper Hessenberg companion matrix of a polynomial with ascending coefficients."""
    a = np.asarray(coeffs, dtype=complex)
    n = len(a) - 1
    C = np.zeros((n, n), dtype=complex)
    C[0, :] = -a[::-1][1:] / a[-1]
    if n > 1:
        C[np.arange(1, n), np.arange(n - 1)] = 1.0
    return C


def poly_roots(coeffs, polish: bool = True) -> np.ndarray:
    """Roots of ``sum coeffs[k] z**k`` (ascending coefficients)."""
    a = np.asarray(coeffs, dtype=complex).ravel()
    if len(a) < 2:
        raise BadSpec("polynomial degree must be at least 1")
    if not np.all(np.isfinite(a)):
        raise BadSpec("non-finite coefficient")
    if abs(a[-1]) <= 1e-300:
        raise DegenerateLeading("leading coefficient vanishes")
    n = len(a) - 1
    nz = 0
    while nz < n and a[nz] == 0:
        nz += 1
    b = a[nz:] / a[-1]
    m = len(b) - 1
    roots = np.zeros(nz, dtype=complex)
    if m > 0:
        # rescale the variable so the monic coefficients are of comparable size
        k = np.arange(m)
        mags = np.abs(b[:m])
        s = np.max(np.where(mags > 0, mags ** (1.0 / (m - k)), 0.0))
        s = 2.0 ** np.round(np.log2(s)) if s > 0 else 1.0
        bs = b * s ** (np.arange(m + 1) - m)
        w = eigvals(balance(companion(bs)))
        r = s * w
        if polish:
            r = _polish(b, r)
        roots = np.concatenate([roots, r])
    return roots


def _polish(b: np.ndarray, r: np.ndarray, steps: int = 2) -> np.ndarray:
    from numpy.polynomial import polynomial as P

    db = P.polyder(b)
    out = r.copy()
    for i, z in enumerate(r):
        others = np.delete(r, i)
        limit = 0.25 * np.min(np.abs(others - z)) if len(others) else np.inf
        fz = P.polyval(z, b)
        for _ in range(steps):
            d = P.polyval(z, db)
            if d == 0:
                break
            z_new = z - fz / d
            if abs(z_new - r[i]) >= limit:
                break
            f_new = P.polyval(z_new, b)
            if abs(f_new) >= abs(fz):
                break
            z, fz = z_new, f_new
        out[i] = z
    return out
