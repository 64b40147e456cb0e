"""Para-orthogonal rational functions and rational Szegő quadrature."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .eig import poly_roots
from .errors import BadTau, DerivativeDegenerate, ZeroOffCircle
from .extc import GammaSequence, is_inf
from .measure import Measure, angle
from .orf import OrfSystem, blaschke_values, second_kind_function
from .ratfun import RationalFunction, derivative_at, evaluate, star_in

TAU_TOL = 1e-12
CIRCLE_TOL = 1e-8


@dataclass(frozen=True)
class Quadrature:
    """Nodes on the unit circle with positive weights."""

    n: int
    tau: complex
    nodes: np.ndarray
    weights: np.ndarray
    seq: GammaSequence | None = None
    kind: str = "G"

    def apply(self, f) -> complex:
        return complex(np.dot(self.weights, np.asarray(f(self.nodes), dtype=complex)))


def _check_tau(tau) -> complex:
    tau = complex(tau)
    if abs(abs(tau) - 1.0) > TAU_TOL:
        raise BadTau(f"|tau| = {abs(tau)} is not 1")
    return tau


def build_porf(sys: OrfSystem, n: int, tau: complex = 1.0):
    """``Q_n = phi_n + tau phi_n^*`` and ``P_n = psi_n - tau psi_n^*``.

    ``P_n`` is ``None`` when no measure is attached to the system.
    """
    tau = _check_tau(tau)
    if not 1 <= n <= sys.degree:
        raise BadTau(f"degree {n} outside 1..{sys.degree}")
    poles = sys.poles(n)
    Q = RationalFunction(sys.phis[n].num + tau * sys.phistars[n].num, poles, n)
    Pn = None
    if sys.mu is not None:
        psi = second_kind_function(sys, n)
        psis = star_in(psi, poles, n)
        Pn = RationalFunction(psi.num - tau * psis.num, poles, n)
    return Q, Pn


def porf_zeros(sys: OrfSystem, n: int, tau: complex = 1.0) -> np.ndarray:
    """The ``n`` zeros of ``Q_n`` (all on the circle), sorted by argument."""
    tau = _check_tau(tau)
    if not 1 <= n <= sys.degree:
        raise BadTau(f"degree {n} outside 1..{sys.degree}")
    num = sys.phis[n].num + tau * sys.phistars[n].num
    roots = poly_roots(num)
    dev = np.max(np.abs(np.abs(roots) - 1.0))
    if dev > CIRCLE_TOL:
        raise ZeroOffCircle(f"PORF zero off the circle by {dev:.2e}")
    roots = roots / np.abs(roots)
    return roots[np.argsort(angle(roots))]


def kernel_weights(sys: OrfSystem, nodes, n: int) -> np.ndarray:
    """``1 / sum_{k<n} |phi_k(xi)|^2`` at each node."""
    vals = np.array([np.atleast_1d(evaluate(sys.phis[k], nodes)) for k in range(n)])
    return 1.0 / np.sum(np.abs(vals) ** 2, axis=0)


def quadrature(sys: OrfSystem, n: int, tau: complex = 1.0) -> Quadrature:
    """``n``-point rule: zeros of ``Q_n`` with Christoffel-type weights."""
    tau = _check_tau(tau)
    nodes = porf_zeros(sys, n, tau)
    w = kernel_weights(sys, nodes, n)
    return Quadrature(n, tau, nodes, w, sys.seq, sys.kind)


def weights_second_kind(sys: OrfSystem, quad: Quadrature) -> np.ndarray:
    """Weights ``P_n(xi) / (2 xi Q_n'(xi))`` (complex; the imaginary parts vanish)."""
    Q, Pn = build_porf(sys, quad.n, quad.tau)
    if Pn is None:
        raise BadTau("second-kind weights need a measure on the system")
    xi = quad.nodes
    dQ = derivative_at(Q, xi)
    if np.any(np.abs(dQ) < 1e-12):
        raise DerivativeDegenerate("Q_n' vanishes at a node")
    return evaluate(Pn, xi) / (2.0 * xi * dQ)


def recurrence_tau(sys: OrfSystem, n: int, tau: complex) -> complex:
    """Parameter ``t`` with ``Q_n`` proportional to ``zeta_{n-1} phi_{n-1} + t phi_{n-1}^*``."""
    lam = sys.lambdas[n - 1]
    eta1 = sys.etas1[n - 1]
    eta2 = np.conj(eta1) * np.conj(sys.seq.sigma(n - 1)) * sys.seq.sigma(n)
    that = np.conj(eta1) * eta2 * tau
    if is_inf(lam):
        return 1.0 / that
    return (that + lam) / (1.0 + that * np.conj(lam))


def translate_tau(seq: GammaSequence, n: int, tau: complex, target_kind: str) -> complex:
    """Parameter for ``target_kind`` (A or B) giving the same rule as kind G with ``tau``."""
    same = (seq.side_of(n) == "A") == (target_kind == "A")
    return tau if same else np.conj(tau)


def exactness_basis(seq: GammaSequence, n: int):
    """Functions ``B_j (B_k)_*`` (``j, k < n``) on the circle, built from the alphas."""
    nus = seq.nus("A", n - 1)

    def make(j, k):
        def f(t):
            B = blaschke_values(nus, t)
            return B[j] * np.conj(B[k])
        return f

    return [make(j, k) for j in range(n) for k in range(n)]


def exactness_error(quad: Quadrature, mu: Measure) -> float:
    """Largest quadrature error over the exactness basis (exact integrals from ``mu``)."""
    nus = quad.seq.nus("A", quad.n - 1)
    Bq = blaschke_values(nus, quad.nodes)
    Bm = blaschke_values(nus, mu.nodes)
    Iq = (Bq * quad.weights) @ np.conj(Bq).T
    Im = (Bm * mu.masses) @ np.conj(Bm).T
    return float(np.max(np.abs(Iq - Im)))


def match_points(a, b):
    """Optimal bipartite matching; returns ``(index_b_for_each_a, max distance)``."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if len(a) != len(b):
        return None, np.inf
    if len(a) == 0:
        return np.zeros(0, dtype=int), 0.0
    D = np.abs(a[:, None] - b[None, :])
    r, c = linear_sum_assignment(D)
    perm = np.empty(len(a), dtype=int)
    perm[r] = c
    return perm, float(D[r, c].max())


def compare_quadratures(q1: Quadrature, q2: Quadrature):
    """Maximum node and weight deviation after matching nodes."""
    perm, dn = match_points(q1.nodes, q2.nodes)
    if perm is None:
        return np.inf, np.inf
    dw = float(np.max(np.abs(np.asarray(q1.weights) - np.asarray(q2.weights)[perm])))
    return dn, dw
