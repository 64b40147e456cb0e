"""Factored unitary matrix representations of the shift operator.

Each degree contributes a 2x2 unitary block acting on rows/columns
``k-1, k``.  The order in which these blocks are multiplied is read off the
side word: a disk-side index ``j`` puts factor ``j`` to the left of factor
``j+1``; an exterior-side index puts it to the right.  All disk sides give a
Hessenberg matrix, alternating sides give the five-diagonal CMV shape.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import eig as _eig
from .errors import BadTau, ParamRegionViolation, ShapeMismatch, SingularResolvent
from .extc import GammaSequence, is_inf
from .orf import OrfSystem
from .porf import Quadrature, _check_tau


@dataclass(frozen=True)
class GFactor:
    """Identity except for a 2x2 block on rows/columns ``k-1`` and ``k``."""

    k: int
    block: np.ndarray
    unitary: bool = True

    def dense(self, size: int) -> np.ndarray:
        M = np.eye(size, dtype=complex)
        i, j = self.k - 1, self.k
        if j < size:
            M[i:j + 1, i:j + 1] = self.block
        elif i < size:
            M[i, i] = self.block[0, 0]
        return M


def gtilde_alpha(lambda_a, eta1: complex, sigma_prev: complex, sigma_n: complex) -> np.ndarray:
    """Unitary block of a disk-side degree from its recurrence data.

    An infinite parameter yields the swap block with the same phases.
    """
    ph = np.conj(sigma_prev) * np.conj(eta1)
    if is_inf(lambda_a):
        return ph * np.array([[0, sigma_n], [1, 0]], dtype=complex)
    lam = complex(lambda_a)
    if abs(lam) > 1:
        raise ParamRegionViolation("block parameter must lie in the closed unit disk")
    r = np.sqrt(max(1.0 - abs(lam) ** 2, 0.0))
    core = np.array([[-lam * eta1, r], [r, np.conj(lam) * np.conj(eta1)]], dtype=complex)
    return ph * core @ np.diag([1.0, sigma_n])


def gtilde_beta(g_alpha: np.ndarray, sigma_n: complex) -> np.ndarray:
    """Conjugate a block by ``diag(sigma_n, 1)``: ``S^H g S``."""
    S = np.diag([sigma_n, 1.0])
    return S.conj().T @ np.asarray(g_alpha, dtype=complex) @ S


def order_from_shape(shape: str) -> tuple:
    """Multiplication order (left to right) of factors ``1..m`` for side word ``shape``.

    ``shape[j-1]`` is the side of index ``j``; factor ``j+1`` goes to the right
    of factor ``j`` when index ``j`` is on the disk side, else to the left.
    """
    m = len(shape)
    if m == 0:
        return ()
    order = [1]
    for j in range(2, m + 1):
        if shape[j - 2] == "A":
            order.append(j)
        else:
            order.insert(0, j)
    return tuple(order)


@dataclass(frozen=True)
class SnakeMatrix:
    """Factor list of size ``size`` with the multiplication order for ``shape``.

    ``factors`` covers indices ``1..size`` (the last one is truncated when the
    dense matrix is formed), so ``len(shape) == size``.
    """

    factors: tuple
    shape: str
    size: int
    order: tuple

    def product(self, factors=None) -> np.ndarray:
        fs = {f.k: f for f in (self.factors if factors is None else factors)}
        M = np.eye(self.size, dtype=complex)
        for k in self.order:
            if k in fs:
                M = M @ fs[k].dense(self.size)
        return M

    def dense(self) -> np.ndarray:
        """Product of the full factors ``1..size-1`` (unitary)."""
        return self.product([f for f in self.factors if f.k < self.size])


def snake_product(seq: GammaSequence, alpha_sys: OrfSystem, n: int, basis: str = "phi") -> SnakeMatrix:
    """Factors ``G_1..G_{n+1}`` of size ``n+1`` built from kind-A recurrence data.

    With ``basis='phi'`` exterior-side indices use the conjugated block; with
    ``basis='varphi'`` every index uses the disk-side block.
    """
    if alpha_sys.kind != "A":
        raise ShapeMismatch("factor data must come from a kind-A system")
    if alpha_sys.degree < n + 1 or seq.N < n + 1:
        raise ShapeMismatch(f"need recurrence data up to degree {n + 1}")
    if basis not in ("phi", "varphi"):
        raise ShapeMismatch(f"unknown basis {basis!r}")
    factors = []
    for k in range(1, n + 2):
        g = gtilde_alpha(alpha_sys.lambdas[k - 1], alpha_sys.etas1[k - 1],
                         seq.sigma(k - 1), seq.sigma(k))
        if basis == "phi" and seq.side_of(k) == "B":
            g = gtilde_beta(g, seq.sigma(k))
        factors.append(GFactor(k, g, True))
    shape = seq.side[: n + 1]
    return SnakeMatrix(tuple(factors), shape, n + 1, order_from_shape(shape))


def truncations(snake: SnakeMatrix, n: int | None = None, mode: str = "unitary", tau: complex = 1.0) -> np.ndarray:
    """Dense ``(n+1) x (n+1)`` matrix with the last factor truncated.

    ``plain``: the last factor keeps only its top-left entry.
    ``unitary``: the last factor becomes ``diag(1, .., 1, tau)``.
    """
    size = snake.size if n is None else n + 1
    if size != snake.size:
        snake = SnakeMatrix(snake.factors[:size], snake.shape[:size], size, order_from_shape(snake.shape[:size]))
    last = snake.factors[size - 1]
    if mode == "plain":
        t = last.block[0, 0]
    elif mode == "unitary":
        t = _check_tau(tau)
    else:
        raise BadTau(f"unknown truncation mode {mode!r}")
    block = np.array([[t, 0], [0, 1]], dtype=complex)
    cut = GFactor(size, block, mode == "unitary")
    return snake.product(list(snake.factors[: size - 1]) + [cut])


def mobius(G, alphas) -> np.ndarray:
    """``eta^{-1} (G + A)(I + A^H G)^{-1} eta`` with ``A = diag(alphas)``, ``eta = sqrt(I - A^H A)``."""
    G = np.asarray(G, dtype=complex)
    a = np.asarray(alphas, dtype=complex)
    n = G.shape[0]
    if len(a) != n:
        raise ShapeMismatch("diagonal length does not match the matrix")
    if np.any(np.abs(a) >= 1):
        raise ParamRegionViolation("Möbius parameters must lie in the open disk")
    eta = np.sqrt(1.0 - np.abs(a) ** 2)
    R = np.eye(n) + np.conj(a)[:, None] * G
    if np.linalg.cond(R) > 1e14:
        raise SingularResolvent("I + A^H G is singular")
    X = np.linalg.solve(R.T, (G + np.diag(a)).T).T
    return (X / eta[:, None]) * eta[None, :]


def alpha_diagonal(seq: GammaSequence, n: int) -> np.ndarray:
    """``(alpha_0 = 0, alpha_1, .., alpha_n)``."""
    return np.array([seq.alpha(j) for j in range(n + 1)], dtype=complex)


def plain_zeros(snake: SnakeMatrix, seq: GammaSequence, n: int) -> np.ndarray:
    """Eigenvalues of the transformed plain truncation (zeros of the disk-side ORF of degree ``n+1``)."""
    return _eig.eigvals(mobius(truncations(snake, n, "plain"), alpha_diagonal(seq, n)))


def spectral_quadrature(snake: SnakeMatrix, seq: GammaSequence, n: int, tau: complex = 1.0) -> Quadrature:
    """Nodes as eigenvalues of the transformed unitary truncation, weights from eigenvectors."""
    U = mobius(truncations(snake, n, "unitary", tau), alpha_diagonal(seq, n))
    w, V = _eig.eig(U)
    w = w / np.abs(w)
    order = np.argsort(np.mod(np.angle(w), 2 * np.pi))
    weights = np.abs(V[0, :]) ** 2
    return Quadrature(n + 1, complex(tau), w[order], weights[order], seq, "G")


def unitarity_error(M) -> float:
    M = np.asarray(M, dtype=complex)
    return float(np.max(np.abs(M.conj().T @ M - np.eye(M.shape[0]))))


def predicted_pattern(shape: str, size: int | None = None) -> np.ndarray:
    """Boolean nonzero pattern of the product of generic blocks in snake order.

    Each factor ``k <= len(shape)`` with ``k < size`` is a full 2x2 block; the
    pattern is the structural product.
    """
    size = len(shape) if size is None else size
    order = order_from_shape(shape)
    P = np.eye(size, dtype=bool)
    for k in order:
        if k >= size:
            continue
        F = np.eye(size, dtype=bool)
        F[k - 1:k + 1, k - 1:k + 1] = True
        P = (P.astype(int) @ F.astype(int)) > 0
    return P


def pattern_ascii(M, tol: float = 1e-13) -> str:
    """Rows of ``x`` (nonzero) and ``.`` (zero)."""
    M = np.asarray(M)
    nz = np.abs(M) > tol if M.dtype != bool else M
    return "\n".join(" ".join("x" if v else "." for v in row) for row in nz)


def eigenvector_consistency(U: np.ndarray, sys: OrfSystem) -> float:
    """Largest ``1 - |cos|`` between eigenvectors of ``U`` and ``conj([phi_0..phi_n](xi))``."""
    w, V = _eig.eig(U)
    n = U.shape[0] - 1
    worst = 0.0
    for j, xi in enumerate(w):
        xi = xi / abs(xi)
        phi = np.array([complex(sys.phis[k](xi)) for k in range(n + 1)])
        v = V[:, j]
        c = abs(np.vdot(np.conj(phi), v)) / (np.linalg.norm(phi) * np.linalg.norm(v))
        worst = max(worst, 1.0 - c)
    return worst


def recurrence_identity_residual(sys: OrfSystem, snake: SnakeMatrix, z: complex) -> float:
    """Residual of ``Phi eta^{-1} [(z I - A) - (I - z A^H) G] = 0`` at ``z``.

    Only columns whose structural support stays clear of the last row are
    checked; the others are affected by the truncated factor.
    """
    size = snake.size
    n = size - 1
    ad = alpha_diagonal(sys.seq, n)
    eta = np.sqrt(1.0 - np.abs(ad) ** 2)
    G = snake.dense()
    phi = np.array([complex(sys.phis[k](z)) for k in range(size)]) / eta
    M = np.diag(z - ad) - (np.eye(size) - z * np.diag(np.conj(ad))) @ G
    r = np.abs(phi @ M)
    full = predicted_pattern(snake.shape, size + 1)
    cols = [j for j in range(size) if not full[size, j] and not full[n, j]]
    return float(np.max(r[cols])) if cols else 0.0
