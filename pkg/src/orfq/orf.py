"""Orthonormal rational function systems.

Three kinds share one representation:

* ``A``: poles taken from the disk parameters ``alpha_j``,
* ``B``: poles from the reflected parameters ``beta_j = 1/conj(alpha_j)``,
* ``G``: poles from the mixed sequence ``gamma_j`` (each either alpha or beta).

Kinds A and B are built by Gram-Schmidt on Blaschke products.  Kind G is
obtained from the kind-A system by reflecting and rescaling numerators.
All kinds can be regenerated from their two-term recurrence data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import (
    BadSpec,
    DegenerateDenominator,
    NonPositiveESquared,
    NormalizationDegenerate,
    ParamRegionViolation,
    PoleHit,
    RankDeficient,
    SequenceMismatch,
    TooCloseToSupport,
)
from .extc import (
    INF,
    GammaSequence,
    is_inf,
    one_minus_abs2,
    phase,
    u_map,
    varpi,
    varpi_coeffs,
    zeta,
)
from .measure import Measure, gram
from .ratfun import (
    RationalFunction,
    evaluate,
    lift,
    numerator_star,
    pad,
    poles_poly,
    poly_at,
    star_in,
)

NONREGULAR_TOL = 1e-12
DENOM_TOL = 1e-13


@dataclass(frozen=True)
class OrfSystem:
    """ORFs ``phi_0..phi_n`` of one kind with their star conjugates and recurrence data.

    ``lambdas[k-1]``, ``es[k-1]`` and ``etas1[k-1]`` belong to degree ``k``.
    ``alpha_system`` links a kind-G system to the kind-A system it came from.
    """

    seq: GammaSequence
    kind: str
    phis: tuple
    phistars: tuple
    lambdas: tuple = ()
    es: tuple = ()
    etas1: tuple = ()
    mu: Measure | None = None
    synthetic: bool = False
    alpha_system: "OrfSystem | None" = field(default=None, repr=False)

    @property
    def degree(self) -> int:
        return len(self.phis) - 1

    def nu(self, j: int):
        return self.seq.nu(self.kind, j)

    def poles(self, n: int) -> tuple:
        return self.seq.nus(self.kind, n)

    def numerator(self, n: int) -> np.ndarray:
        return self.phis[n].num

    def numerator_star(self, n: int) -> np.ndarray:
        """``p_n^*`` (so that ``phi_n^* = varsigma_n p_n^* / pi_n``)."""
        return numerator_star(self.phis[n].num, n)

    def zeta(self, n: int, z):
        return zeta(self.nu(n), z)

    def values(self, z) -> np.ndarray:
        """Rows ``phi_0(z)..phi_n(z)`` stacked into an array of shape ``(n+1, len(z))``."""
        return np.array([np.atleast_1d(evaluate(f, z)) for f in self.phis])


# ---------------------------------------------------------------- basis helpers


def blaschke_numerator(nus, j: int, n: int) -> np.ndarray:
    """Numerator of ``B_j`` written over the level-``n`` denominator ``prod_{i<=n} varpi(nu_i)``."""
    out = np.array([1.0 + 0j])
    for i in range(j):
        out = P.polymul(out, np.asarray(varpi_coeffs(nus[i], "star")) * u_map(nus[i]))
    for i in range(j, n):
        out = P.polymul(out, varpi_coeffs(nus[i], "plain"))
    return pad(out, n + 1)


def blaschke_values(nus, z: np.ndarray) -> np.ndarray:
    """``B_0(z)..B_n(z)`` as rows, for the parameters ``nus = (nu_1..nu_n)``."""
    z = np.asarray(z, dtype=complex)
    rows = [np.ones_like(z)]
    for nu in nus:
        if is_inf(nu):
            f = 1.0 / z
        elif nu == 0:
            f = z
        else:
            f = u_map(nu) * (z - nu) / (1.0 - np.conj(nu) * z)
        rows.append(rows[-1] * f)
    return np.array(rows)


def normalization_value(sys_or_seq, kind: str, n: int, num: np.ndarray) -> complex:
    """The quantity that the kind's normalization requires to be positive.

    ``num`` is the numerator ``p_n`` of ``phi_n`` (formal degree ``n``).
    Kind A: ``phi_n^*(alpha_n)``.  Kind B: ``phi_n^*(beta_n)``.  Kind G:
    ``phi_n^*`` divided by the opposite-side dotted Blaschke product, at
    ``gamma_n``, in a form free of cancelling factors.
    """
    seq = sys_or_seq.seq if isinstance(sys_or_seq, OrfSystem) else sys_or_seq
    pst = numerator_star(num, n)
    if n == 0:
        return complex(np.conj(num[0]))
    if kind in ("A", "B"):
        nus = seq.nus(kind, n)
        f = RationalFunction(seq.varsigma(n) * pst, nus, n)
        return complex(evaluate(f, nus[-1]))
    a_idx = seq.a_indices(n)
    b_idx = seq.b_indices(n)
    if seq.side_of(n) == "A":
        z = seq.alpha(n)
        vs = np.prod([seq.sigma(j) for j in a_idx]) if a_idx else 1.0
        den = np.prod([varpi(seq.alpha(j), z) for j in a_idx]) if a_idx else 1.0
        for j in b_idx:
            den *= varpi(seq.beta(j), z, "star")
        return complex(vs * P.polyval(z, pst) / den)
    z = seq.beta(n)
    vs = np.prod([seq.sigma(j) for j in b_idx]) if b_idx else 1.0
    if is_inf(z):
        lead = 1.0 + 0j
        for j in b_idx:
            b = seq.beta(j)
            lead *= -1.0 if is_inf(b) else -np.conj(b)
        return complex(vs * pst[n] / lead)
    den = np.prod([varpi(seq.beta(j), z) for j in b_idx]) if b_idx else 1.0
    for j in a_idx:
        den *= z - seq.alpha(j)
    return complex(vs * P.polyval(z, pst) / den)


def _star_pair(num: np.ndarray, poles: tuple, n: int):
    f = RationalFunction(num, poles, n)
    return f, star_in(f, poles, n)


# ---------------------------------------------------------------- Gram-Schmidt


def gram_schmidt_orf(mu: Measure, seq: GammaSequence, n: int, kind: str = "A") -> OrfSystem:
    """Orthonormalize ``B_0..B_n`` of the given kind (A or B) under ``mu``.

    Modified Gram-Schmidt with one reorthogonalization pass on the weighted
    value vectors; coefficients in the Blaschke basis are tracked so that
    numerators can be assembled exactly.
    """
    if kind not in ("A", "B"):
        raise BadSpec("Gram-Schmidt is available for kinds A and B only")
    if n > seq.N:
        raise SequenceMismatch(f"degree {n} exceeds the {seq.N} available poles")
    seq = seq.prefix(n)
    nus = seq.nus(kind, n)
    sw = np.sqrt(mu.masses)
    X = (blaschke_values(nus, mu.nodes) * sw).T
    N, m = X.shape
    Qm = np.zeros((N, m), dtype=complex)
    R = np.zeros((m, m), dtype=complex)
    for k in range(m):
        v = X[:, k].copy()
        for _ in range(2):
            for i in range(k):
                r = np.vdot(Qm[:, i], v)
                R[i, k] += r
                v -= r * Qm[:, i]
        R[k, k] = np.linalg.norm(v)
        if R[k, k].real <= 1e-11 * max(np.linalg.norm(X[:, k]), 1e-300):
            raise RankDeficient(f"Blaschke basis is degenerate at degree {k} under this measure")
        Qm[:, k] = v / R[k, k]
    C = np.linalg.solve(R, np.eye(m))
    phis, phistars = [], []
    for k in range(m):
        num = np.zeros(k + 1, dtype=complex)
        for j in range(k + 1):
            num += C[j, k] * blaschke_numerator(nus, j, k)
        q = normalization_value(seq, kind, k, num)
        if abs(q) <= 1e-12:
            raise NormalizationDegenerate(f"normalization quantity vanishes at degree {k}")
        num = num * phase(q)
        f, fs = _star_pair(num, nus[:k], k)
        phis.append(f)
        phistars.append(fs)
    sys = OrfSystem(seq, kind, tuple(phis), tuple(phistars), mu=mu)
    return _with_recurrence(sys)


def cholesky_orf_values(mu: Measure, seq: GammaSequence, n: int, kind: str, z) -> np.ndarray:
    """Independent route: ORF values from the Cholesky factor of the exact Gram matrix.

    Returns ``phi_0(z)..phi_n(z)`` (rows) normalized to positive leading
    coefficient in the Blaschke basis.
    """
    nus = seq.nus(kind, n)
    Bn = blaschke_values(nus, mu.nodes)
    G = (np.conj(Bn) * mu.masses) @ Bn.T
    L = np.linalg.cholesky(G)
    C = np.linalg.inv(L).conj().T
    return C.T @ blaschke_values(nus, z)


# ---------------------------------------------------------------- kind G


def derive_gamma_system(alpha_sys: OrfSystem, seq: GammaSequence) -> OrfSystem:
    """ORFs for the mixed sequence ``seq`` from the kind-A system on the same alphas.

    Disk-side degrees reuse the alpha numerator, exterior-side degrees its
    reflected numerator; both are scaled by ``prod_{b-indices}(-|beta_j|)``
    (``-1`` for an infinite beta) and by ``varsigma_n`` on the exterior side.
    """
    if alpha_sys.kind != "A":
        raise SequenceMismatch("derive_gamma_system needs a kind-A system")
    n = alpha_sys.degree
    if seq.N < n:
        raise SequenceMismatch("gamma sequence shorter than the alpha system")
    seq = seq.prefix(n)
    if not np.allclose(np.array(seq.alphas), np.array(alpha_sys.seq.alphas[:n]), atol=1e-15, rtol=0):
        raise SequenceMismatch("alpha parameters of the two sequences differ")
    phis, phistars = [], []
    for k in range(n + 1):
        pa = alpha_sys.phis[k].num
        const = 1.0
        for j in seq.b_indices(k):
            a = abs(seq.alpha(j))
            const *= -1.0 if a == 0 else -1.0 / a
        if k == 0 or seq.side_of(k) == "A":
            num = const * pa
        else:
            num = const * seq.varsigma(k) * numerator_star(pa, k)
        f, fs = _star_pair(num, seq.nus("G", k), k)
        phis.append(f)
        phistars.append(fs)
    sys = OrfSystem(seq, "G", tuple(phis), tuple(phistars), mu=alpha_sys.mu,
                    synthetic=alpha_sys.synthetic, alpha_system=alpha_sys)
    return _with_recurrence(sys)


def build_system(mu: Measure, seq: GammaSequence, n: int, kind: str = "G") -> OrfSystem:
    """Convenience constructor for any kind."""
    if kind in ("A", "B"):
        return gram_schmidt_orf(mu, seq, n, kind)
    if kind == "G":
        return derive_gamma_system(gram_schmidt_orf(mu, seq, n, "A"), seq)
    raise BadSpec(f"unknown kind {kind!r}")


# ---------------------------------------------------------------- recurrence


def _pstar_at(num: np.ndarray, n: int, z):
    return poly_at(numerator_star(num, n), z, n)


def e_squared(nu_n, nu_prev, lam) -> float:
    """``(1-|nu_n|^2) / (1-|nu_{n-1}|^2) / (1-|lambda|^2)``; an infinite lambda contributes ``-1``."""
    return one_minus_abs2(nu_n) / one_minus_abs2(nu_prev) / one_minus_abs2(lam)


def lambda_from_numerators(seq: GammaSequence, kind: str, n: int, pn, pprev, tol: float = NONREGULAR_TOL):
    """Recurrence parameter of degree ``n`` computed from the numerators ``p_n`` and ``p_{n-1}``."""
    nu_prev = seq.nu(kind, n - 1)
    pns = numerator_star(pn, n)
    a = _pstar_at(pprev, n - 1, nu_prev)
    b = poly_at(pns, nu_prev, n)
    if abs(b) <= tol * max(np.max(np.abs(pns)), 1e-300):
        return INF
    if a == 0:
        raise NormalizationDegenerate(f"p*_{n-1} vanishes at its own pole parameter")
    eta = np.conj(seq.varsigma(n - 2)) * np.conj(a) / a
    return complex(eta * poly_at(pn, nu_prev, n) / np.conj(b))


def recurrence_step(prev, data, seq: GammaSequence, n: int, kind: str = "G"):
    """Advance ``(phi_{n-1}, phi_{n-1}^*)`` to ``(phi_n, phi_n^*)``.

    ``data = (lambda_n, e_n, eta_n1)``; ``lambda_n`` may be :data:`INF`, in
    which case the two inputs are swapped instead of mixed.  The second
    component of ``prev`` is used as given, so the same step also drives
    pairs such as ``(psi, -psi^*)``.
    """
    lam, e, eta1 = data
    nus = seq.nus(kind, n)
    nu_prev = seq.nu(kind, n - 1)
    s_prev = seq.sigma(n - 1)
    s_n = seq.sigma(n)
    eta2 = np.conj(eta1) * np.conj(s_prev) * s_n
    top = lift(prev[0], nus[: n - 1], n - 1).num
    bot = lift(prev[1], nus[: n - 1], n - 1).num
    vs = np.asarray(varpi_coeffs(nu_prev, "star"))
    vp = np.asarray(varpi_coeffs(nu_prev, "plain"))
    a = P.polymul(vs * s_prev, top)
    b = P.polymul(vp, bot)
    if is_inf(lam):
        num = e * eta1 * b
        nst = e * eta2 * a
    else:
        num = e * eta1 * (P.polyadd(a, lam * b))
        nst = e * eta2 * (P.polyadd(np.conj(lam) * a, b))
    return (RationalFunction(pad(num, n + 1), nus, n),
            RationalFunction(pad(nst, n + 1), nus, n))


def _eta1_closed_form(sys: OrfSystem, n: int):
    """Closed-form phase for kinds A/B when the previous parameter is finite."""
    nu_prev = sys.nu(n - 1)
    if is_inf(nu_prev):
        return None
    val = varpi(sys.nu(n), nu_prev) * evaluate(sys.phistars[n], nu_prev) * one_minus_abs2(nu_prev)
    return np.conj(sys.seq.sigma(n - 1)) * sys.seq.sigma(n) * u_map(val)


def _eta1_phase_fix(sys: OrfSystem, n: int, prev, lam, e) -> complex:
    _, st = recurrence_step(prev, (lam, e, 1.0), sys.seq, n, sys.kind)
    num_tilde = numerator_star(st.num / sys.seq.varsigma(n), n)
    q = normalization_value(sys.seq, sys.kind, n, num_tilde)
    if q == 0:
        raise NormalizationDegenerate(f"cannot fix the phase at degree {n}")
    return complex(phase(q))


def extract_recurrence_data(sys: OrfSystem, tol: float = NONREGULAR_TOL):
    """Recover ``(lambdas, es, etas1)`` from the numerators of a system."""
    lambdas, es, etas = [], [], []
    for n in range(1, sys.degree + 1):
        lam = lambda_from_numerators(sys.seq, sys.kind, n, sys.phis[n].num, sys.phis[n - 1].num, tol)
        e2 = e_squared(sys.nu(n), sys.nu(n - 1), lam)
        if not e2 > 0:
            raise NonPositiveESquared(f"e_{n}^2 = {e2} is not positive")
        e = math.sqrt(e2)
        prev = (sys.phis[n - 1], sys.phistars[n - 1])
        eta1 = None
        if sys.kind in ("A", "B"):
            eta1 = _eta1_closed_form(sys, n)
        if eta1 is None:
            eta1 = _eta1_phase_fix(sys, n, prev, lam, e)
        lambdas.append(lam)
        es.append(e)
        etas.append(complex(eta1))
    return tuple(lambdas), tuple(es), tuple(etas)


def _with_recurrence(sys: OrfSystem) -> OrfSystem:
    lam, es, etas = extract_recurrence_data(sys)
    return replace(sys, lambdas=lam, es=es, etas1=etas)


def run_recurrence(seq: GammaSequence, lambdas, es, etas1, kind: str = "G", start=None):
    """Replay the recurrence from ``phi_0 = phi_0^* = 1``; returns the two lists."""
    one = RationalFunction([1.0], (), 0)
    pair = (one, one) if start is None else start
    phis, phistars = [pair[0]], [pair[1]]
    for n in range(1, len(lambdas) + 1):
        pair = recurrence_step(pair, (lambdas[n - 1], es[n - 1], etas1[n - 1]), seq, n, kind)
        phis.append(pair[0])
        phistars.append(pair[1])
    return phis, phistars


def synthesize_from_params(lambdas, seq: GammaSequence, kind: str = "G") -> OrfSystem:
    """Generate a family from recurrence parameters alone (``eta_n1 = 1``).

    The parameters must lie in the region the sides demand: inside the disk
    for consecutive same-side poles, outside the closed disk (or infinite) at
    a side switch.  No measure is attached.
    """
    lambdas = tuple(INF if is_inf(l) else complex(l) for l in lambdas)
    n = len(lambdas)
    seq = seq.prefix(n)
    es = []
    for k in range(1, n + 1):
        e2 = e_squared(seq.nu(kind, k), seq.nu(kind, k - 1), lambdas[k - 1])
        if not e2 > 0 or not math.isfinite(e2):
            raise ParamRegionViolation(f"lambda_{k} = {lambdas[k - 1]} gives e^2 = {e2}")
        es.append(math.sqrt(e2))
    etas = (1.0 + 0j,) * n
    phis, phistars = run_recurrence(seq, lambdas, es, etas, kind)
    return OrfSystem(seq, kind, tuple(phis), tuple(phistars), lambdas, tuple(es), etas,
                     mu=None, synthetic=True)


def random_params(rng: np.random.Generator, seq: GammaSequence, kind: str = "G",
                  inner: float = 0.8) -> tuple:
    """Random parameters in the admissible region for ``seq``."""
    out = []
    for k in range(1, seq.N + 1):
        r = inner * math.sqrt(rng.uniform())
        th = rng.uniform(0, 2 * math.pi)
        lam = r * complex(math.cos(th), math.sin(th))
        same = kind != "G" or seq.side_of(k) == seq.side_of(k - 1)
        if not same:
            lam = 1.0 / np.conj(lam) if lam != 0 else INF
        out.append(lam)
    return tuple(out)


def reconstruct_measure(sys: OrfSystem, tau: complex = 1.0) -> Measure:
    """A discrete measure making ``phi_0..phi_n`` orthonormal.

    Atoms are the zeros of ``zeta_n phi_n + tau phi_n^*`` (``n + 1`` of them,
    on the circle) and masses are ``1/sum_{k<=n} |phi_k|^2`` there.
    """
    from .eig import poly_roots
    from .measure import discrete

    n = sys.degree
    nu = sys.nu(n)
    # numerator of zeta_n phi_n + tau phi_n^* over pi_n * varpi_n
    s = u_map(nu)
    top = P.polymul(np.asarray(varpi_coeffs(nu, "star")) * s, sys.phis[n].num)
    bot = P.polymul(varpi_coeffs(nu, "plain"), sys.phistars[n].num)
    num = pad(P.polyadd(top, tau * bot), n + 2)
    roots = poly_roots(num)
    roots = roots / np.abs(roots)
    vals = np.array([np.atleast_1d(evaluate(f, roots)) for f in sys.phis])
    w = 1.0 / np.sum(np.abs(vals) ** 2, axis=0)
    return discrete(roots, w)


# ---------------------------------------------------------------- CD kernels


def _lin(z, w):
    """``1 - z conj(w)`` with leading-coefficient rules at infinity."""
    if is_inf(z) and is_inf(w):
        return -1.0 + 0j
    if is_inf(w):
        return -complex(z)
    if is_inf(z):
        return -np.conj(complex(w))
    return 1.0 - complex(z) * np.conj(complex(w))


def _val(f: RationalFunction, z):
    return complex(evaluate(f, z))


def cd_kernel(sys: OrfSystem, n: int, z, w, form: str = "sum") -> complex:
    """Christoffel-Darboux kernel of level ``n``.

    ``sum``: the defining sum of ``phi_k(z) conj(phi_k(w))``.
    ``first``/``second``: closed forms with ``zeta_n`` resp. ``zeta_{n+1}``.
    ``numerator``: ``C_n(z, w) = k_n(z, w) pi_n(z) conj(pi_n(w))`` from
    numerators only; ``z`` and ``w`` may be infinite, meaning the top
    coefficient in ``z`` resp. ``conj(w)`` of formal degree ``n``.
    """
    if form == "sum":
        return complex(sum(_val(sys.phis[k], z) * np.conj(_val(sys.phis[k], w)) for k in range(n + 1)))
    if form == "first":
        zz, zw = zeta(sys.nu(n), z), zeta(sys.nu(n), w)
        if is_inf(zz) or is_inf(zw):
            raise DegenerateDenominator("Blaschke factor infinite at an argument")
        den = 1.0 - zz * np.conj(zw)
        if abs(den) < DENOM_TOL:
            raise DegenerateDenominator("1 - zeta(z) conj(zeta(w)) vanishes")
        fs, f = sys.phistars[n], sys.phis[n]
        return complex((_val(fs, z) * np.conj(_val(fs, w))
                        - zz * np.conj(zw) * _val(f, z) * np.conj(_val(f, w))) / den)
    if form == "second":
        if n + 1 > sys.degree:
            raise DegenerateDenominator("second form needs degree n+1")
        zz, zw = zeta(sys.nu(n + 1), z), zeta(sys.nu(n + 1), w)
        if is_inf(zz) or is_inf(zw):
            raise DegenerateDenominator("Blaschke factor infinite at an argument")
        den = 1.0 - zz * np.conj(zw)
        if abs(den) < DENOM_TOL:
            raise DegenerateDenominator("1 - zeta(z) conj(zeta(w)) vanishes")
        fs, f = sys.phistars[n + 1], sys.phis[n + 1]
        return complex((_val(fs, z) * np.conj(_val(fs, w)) - _val(f, z) * np.conj(_val(f, w))) / den)
    if form == "numerator":
        return cd_numerator(sys, n, z, w)
    raise BadSpec(f"unknown CD form {form!r}")


def cd_numerator(sys: OrfSystem, n: int, z, w) -> complex:
    """``C_n(z, w)`` from the numerators of degree ``n+1`` (or ``n`` at the top degree).

    Uses ``C_n = N / ((1 - |nu|^2)(1 - z conj(w)))`` where ``N`` is the
    numerator combination and ``nu`` the pole parameter of the degree used;
    an infinite parameter gives the factor ``-1`` and an infinite argument
    selects top coefficients throughout.
    """
    lin = _lin(z, w)
    if n + 1 <= sys.degree:
        m = n + 1
        p = sys.phis[m].num
        ps = numerator_star(p, m)
        N = (poly_at(ps, z, m) * np.conj(poly_at(ps, w, m))
             - poly_at(p, z, m) * np.conj(poly_at(p, w, m)))
        den = one_minus_abs2(sys.nu(m)) * lin
    else:
        nu = sys.nu(n)
        p = sys.phis[n].num
        ps = numerator_star(p, n)
        vp = varpi_coeffs(nu, "plain")
        vs = varpi_coeffs(nu, "star")
        N = (poly_at(ps, z, n) * poly_at(vp, z, 1) * np.conj(poly_at(ps, w, n) * poly_at(vp, w, 1))
             - poly_at(vs, z, 1) * poly_at(p, z, n) * np.conj(poly_at(vs, w, 1) * poly_at(p, w, n)))
        den = one_minus_abs2(nu) * lin
    if abs(den) < DENOM_TOL:
        raise DegenerateDenominator("numerator-form denominator vanishes")
    return complex(N / den)


def cd_numerator_sum(sys: OrfSystem, n: int, z, w) -> complex:
    """``C_n(z, w)`` as a sum over lifted numerators (independent of the closed forms)."""
    poles = sys.poles(n)
    out = 0j
    for k in range(n + 1):
        L = lift(sys.phis[k], poles, n).num
        out += poly_at(L, z, n) * np.conj(poly_at(L, w, n))
    return complex(out)


# ---------------------------------------------------------------- second kind


def second_kind(sys: OrfSystem, n: int, z) -> complex:
    """``psi_n(z) = integral (t+z)/(t-z) [phi_n(t) - phi_n(z)] dmu(t)``; ``psi_0 = 1``."""
    if n == 0:
        return 1.0 + 0j
    mu = sys.mu
    if mu is None:
        raise BadSpec("functions of the second kind need a measure")
    if mu.support_distance(z) <= 1e-10:
        raise TooCloseToSupport(f"{z} is too close to the support of the measure")
    t = mu.nodes
    ft = evaluate(sys.phis[n], t)
    fz = evaluate(sys.phis[n], z)
    return complex(np.dot(mu.masses, (t + z) / (t - z) * (ft - fz)))


def _interp_points(poles, m: int) -> np.ndarray:
    sing = [1.0 / np.conj(p) for p in poles if not is_inf(p) and p != 0]
    for r in (1.5, 1.7, 1.3, 1.9, 1.1):
        z = r * np.exp(2j * np.pi * (np.arange(m) + 0.3) / m)
        if not sing or np.min(np.abs(z[:, None] - np.array(sing)[None, :])) > 1e-3:
            return z
    raise PoleHit("no pole-free interpolation circle found")


def second_kind_function(sys: OrfSystem, n: int) -> RationalFunction:
    """``psi_n`` as a rational function over the denominator of ``phi_n``."""
    poles = sys.poles(n)
    if n == 0:
        return RationalFunction([1.0], (), 0)
    z = _interp_points(poles, n + 1)
    vals = np.array([second_kind(sys, n, zk) for zk in z]) * P.polyval(z, poles_poly(poles))
    V = np.vander(z, n + 1, increasing=True)
    num = np.linalg.solve(V, vals)
    return RationalFunction(num, poles, n)


def second_kind_pairs(sys: OrfSystem):
    """Lists ``psi_0..psi_n`` and ``psi_0^*..psi_n^*``."""
    psis, stars = [], []
    for k in range(sys.degree + 1):
        f = second_kind_function(sys, k)
        psis.append(f)
        stars.append(star_in(f, sys.poles(k), k))
    return psis, stars


# ---------------------------------------------------------------- checks


def gram_matrix(sys: OrfSystem, mu: Measure | None = None) -> np.ndarray:
    mu = sys.mu if mu is None else mu
    return gram(list(sys.phis), mu)


def orthonormality_error(sys: OrfSystem, mu: Measure | None = None) -> float:
    G = gram_matrix(sys, mu)
    return float(np.max(np.abs(G - np.eye(len(G)))))
