"""Products of elementary 2x2-block factors taken in arbitrary order.

A factor ``G_k`` acts on rows/columns ``k-1, k``.  Factors whose indices
differ by more than one commute, so of the ``k!`` orderings only ``2**(k-1)``
distinct products exist: each is fixed by whether ``G_j`` stands left or right
of ``G_{j-1}``.  The functions here build such products, compare determinants
and spectra of diagonal-scaled versions across orderings, and check that
eigenvector moduli of the unitary rational variant do not depend on the order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import eig as _eig
from .errors import (
    NumericalError,
    ReducibleFactor,
    ShapeMismatch,
    SingularPencilEverywhere,
    TooLarge,
)
from .matfac import GFactor, mobius
from .porf import match_points

MAX_ORDERINGS = 2**14
LU_CHECK_MAX = 8


@dataclass(frozen=True)
class ElementaryFactor(GFactor):
    """General (not necessarily unitary) 2x2 block embedded at ``k-1, k``."""

    unitary: bool = False


def _size_of(factors) -> int:
    return max(f.k for f in factors) + 1 if factors else 1


def product_in_order(factors, pi, size: int | None = None) -> np.ndarray:
    """``G_{pi[0]} G_{pi[1]} ...`` as a dense ``size x size`` matrix."""
    by_k = {f.k: f for f in factors}
    size = _size_of(factors) if size is None else size
    if size < _size_of(factors):
        raise ShapeMismatch("matrix too small for the factor indices")
    if sorted(pi) != sorted(by_k):
        raise ShapeMismatch("ordering must be a permutation of the factor indices")
    M = np.eye(size, dtype=complex)
    for k in pi:
        M = M @ by_k[k].dense(size)
    return M


def word_of(pi) -> str:
    """Commutation class of ``pi``: ``R`` when ``j`` follows ``j-1``, ``L`` otherwise."""
    pos = {k: i for i, k in enumerate(pi)}
    return "".join("R" if pos[j] > pos[j - 1] else "L" for j in range(2, len(pi) + 1))


def ordering_from_word(word: str) -> tuple:
    """Canonical representative of the class described by ``word``."""
    order = [1]
    for j, c in enumerate(word, start=2):
        if c == "R":
            order.append(j)
        elif c == "L":
            order.insert(0, j)
        else:
            raise ShapeMismatch(f"bad ordering word {word!r}")
    return tuple(order)


def distinct_orderings(k: int) -> list:
    """One ordering per commutation class of ``1..k`` (``2**(k-1)`` of them)."""
    if k < 1:
        raise ShapeMismatch("need at least one factor")
    if 2 ** (k - 1) > MAX_ORDERINGS:
        raise TooLarge(f"{2 ** (k - 1)} orderings exceed the cap of {MAX_ORDERINGS}")
    return [ordering_from_word("".join(w)) for w in itertools.product("RL", repeat=k - 1)]


def sample_orderings(k: int, count: int, rng: np.random.Generator) -> list:
    """``count`` random class representatives (the identity order first)."""
    out = [tuple(range(1, k + 1))]
    for _ in range(count - 1):
        out.append(ordering_from_word("".join(rng.choice(["R", "L"], size=k - 1))))
    return out


def _det(M: np.ndarray) -> complex:
    d = _eig.det(M)
    if M.shape[0] <= LU_CHECK_MAX:
        ref = complex(np.linalg.det(M))
        scale = max(abs(ref), np.prod(np.maximum(np.linalg.norm(M, axis=1), 1e-300)) * 1e-12, 1e-300)
        if abs(d - ref) > 1e-8 * scale:
            raise NumericalError(f"Schur and LU determinants disagree ({d} vs {ref})")
    return d


def ampd_matrix(A, factors, pi, D, size: int | None = None) -> np.ndarray:
    a = np.asarray(A, dtype=complex)
    d = np.asarray(D, dtype=complex)
    size = len(a) if size is None else size
    if len(a) != size or len(d) != size:
        raise ShapeMismatch("diagonals must match the matrix size")
    M = product_in_order(factors, pi, size)
    return a[:, None] * M + np.diag(d)


def ampd_det(A, factors, pi, D, truncate: bool = False) -> complex:
    """``det(A M_pi + D)``; with ``truncate`` the last row and column are dropped first."""
    X = ampd_matrix(A, factors, pi, D)
    if truncate:
        X = X[:-1, :-1]
    return _det(X)


def sort_eigs(w) -> np.ndarray:
    w = np.asarray(w, dtype=complex)
    idx = np.lexsort((np.round(np.abs(w), 12), np.round(np.mod(np.angle(w), 2 * np.pi), 12)))
    return w[idx]


def _pencil_eigs(P: np.ndarray, Q: np.ndarray) -> np.ndarray:
    """Finite eigenvalues of ``(P, Q)`` from the interpolated ``det(P - lam Q)``."""
    n = P.shape[0]
    x = np.cos(np.pi * (np.arange(n + 1) + 0.5) / (n + 1))
    vals = np.array([_eig.det(P - t * Q) for t in x])
    cheb = np.polynomial.chebyshev.chebfit(x, vals, n)
    coeffs = np.polynomial.chebyshev.cheb2poly(cheb)
    scale = np.max(np.abs(coeffs)) if coeffs.size else 0.0
    if scale <= 1e-300:
        raise SingularPencilEverywhere("det(P - lam Q) vanishes identically")
    coeffs = np.trim_zeros(np.where(np.abs(coeffs) > 1e-12 * scale, coeffs, 0), "b")
    if len(coeffs) <= 1:
        return np.zeros(0, dtype=complex)
    return _eig.poly_roots(coeffs)


def rampd_eigs(A, B, C, D, factors, pi) -> np.ndarray:
    """Eigenvalues of ``(A M + C)(B M + D)^{-1}``, or of the pencil if the inverse fails."""
    a, b, c, d = (np.asarray(x, dtype=complex) for x in (A, B, C, D))
    size = len(a)
    M = product_in_order(factors, pi, size)
    P = a[:, None] * M + np.diag(c)
    Q = b[:, None] * M + np.diag(d)
    if np.linalg.cond(Q) < 1e12:
        R = np.linalg.solve(Q.T, P.T).T
        return sort_eigs(_eig.eigvals(R))
    return sort_eigs(_pencil_eigs(P, Q))


def unitary_factor(delta: complex, k: int) -> GFactor:
    """``[[-delta, eta], [eta, conj(delta)]]`` with ``eta = sqrt(1 - |delta|^2)``."""
    delta = complex(delta)
    if abs(delta) >= 1 - 1e-10:
        raise ReducibleFactor(f"|delta_{k}| = {abs(delta)} makes the factor diagonal")
    e = np.sqrt(1 - abs(delta) ** 2)
    return GFactor(k, np.array([[-delta, e], [e, np.conj(delta)]], dtype=complex), True)


def _multiset_dev(a, b) -> float:
    return match_points(a, b)[1]


def unitary_rampd_report(alphas, deltas, orderings) -> dict:
    """Eigenvalue and ``|V|`` deviation of ``R_pi`` across ``orderings``.

    ``alphas`` has length ``n+1`` (the matrix size) and ``deltas`` length
    ``n``; factor ``k`` is built from ``deltas[k-1]``.
    """
    a = np.asarray(alphas, dtype=complex)
    factors = [unitary_factor(dl, k) for k, dl in enumerate(deltas, start=1)]
    size = len(a)
    if _size_of(factors) > size:
        raise ShapeMismatch("too many factors for the diagonal")
    ref_w = ref_V = None
    lam_dev = v_dev = 0.0
    wsum_dev = 0.0
    rows = []
    for pi in orderings:
        R = mobius(product_in_order(factors, pi, size), a)
        w, V = _eig.eig(R)
        wsum_dev = max(wsum_dev, abs(np.sum(np.abs(V[0]) ** 2) - 1.0))
        if ref_w is None:
            ref_w, ref_V = w, np.abs(V)
            perm = np.arange(size)
        else:
            perm, dev = match_points(ref_w, w)
            lam_dev = max(lam_dev, dev)
            v_dev = max(v_dev, float(np.max(np.abs(ref_V - np.abs(V[:, perm])))))
        rows.append({"ordering": list(pi), "eigenvalues": w[perm], "weights": np.abs(V[0, perm]) ** 2})
    return {"lambda_dev": lam_dev, "absV_dev": v_dev, "weight_sum_dev": wsum_dev, "orderings": rows}


def random_factors(rng: np.random.Generator, k: int) -> list:
    """``k`` general complex blocks."""
    return [ElementaryFactor(j, rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
            for j in range(1, k + 1)]


def random_deltas(rng: np.random.Generator, k: int, radius: float = 0.9) -> np.ndarray:
    r = radius * np.sqrt(rng.uniform(size=k))
    return r * np.exp(2j * np.pi * rng.uniform(size=k))


def random_diag(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.normal(size=n) + 1j * rng.normal(size=n)


def det_invariance(A, factors, D, orderings, truncate: bool = False) -> tuple:
    """Determinants per ordering and their largest relative spread."""
    dets = np.array([ampd_det(A, factors, pi, D, truncate) for pi in orderings])
    ref = dets[0]
    dev = float(np.max(np.abs(dets - ref)) / max(abs(ref), 1e-300))
    return dets, dev


def rampd_invariance(A, B, C, D, factors, orderings) -> tuple:
    eigs = [rampd_eigs(A, B, C, D, factors, pi) for pi in orderings]
    dev = max((_multiset_dev(eigs[0], e) for e in eigs[1:]), default=0.0)
    return eigs, dev
