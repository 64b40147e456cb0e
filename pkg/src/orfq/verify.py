"""Seeded invariant suite used by ``orfq verify`` and the test-suite.

Every group draws its instances from one generator seeded once, runs a
family of checks and reports the worst deviation against its tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import ampd, eig, matfac, orf, porf
from .extc import INF, GammaSequence, blaschke_products, is_inf
from .measure import Measure, random_discrete
from .ratfun import RationalFunction, evaluate


@dataclass
class GroupResult:
    name: str
    value: float
    tol: float
    detail: str = ""

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.value) and self.value <= self.tol)

    def as_dict(self) -> dict:
        return {"name": self.name, "value": float(self.value), "tol": self.tol,
                "passed": self.passed, "detail": self.detail}


def random_alphas(rng: np.random.Generator, n: int, radius: float = 0.8, zero_prob: float = 0.0) -> tuple:
    r = radius * np.sqrt(rng.uniform(size=n))
    a = r * np.exp(2j * np.pi * rng.uniform(size=n))
    if zero_prob:
        a[rng.uniform(size=n) < zero_prob] = 0
    return tuple(complex(x) for x in a)


def random_sequence(rng: np.random.Generator, n: int, radius: float = 0.8, zero_prob: float = 0.0,
                    side: str | None = None) -> GammaSequence:
    """Random alphas with a random (or given) side word and random ``gamma_0``."""
    alphas = random_alphas(rng, n, radius, zero_prob)
    if side is None:
        side = "".join(rng.choice(["A", "B"], size=n))
    g0 = "A" if rng.uniform() < 0.5 else "B"
    return GammaSequence(alphas, side, g0)


def random_instance(rng: np.random.Generator, n: int, N: int = 60, zero_prob: float = 0.0):
    mu = random_discrete(0, N, rng=rng)
    return mu, random_sequence(rng, n, zero_prob=zero_prob)


def expected_lambda(lam_alpha, side_prev: str, side_n: str):
    """Parameter of the mixed system predicted from the disk-side parameter."""
    if side_prev == "A" and side_n == "A":
        return lam_alpha
    if side_prev == "B" and side_n == "B":
        return INF if is_inf(lam_alpha) else np.conj(lam_alpha)
    if is_inf(lam_alpha):
        return 0j
    if lam_alpha == 0:
        return INF
    return 1.0 / np.conj(lam_alpha) if side_prev == "A" else 1.0 / lam_alpha


def circle_grid(m: int = 128) -> np.ndarray:
    return np.exp(2j * np.pi * (np.arange(m) + 0.25) / m)


def sup_diff(f: RationalFunction, g: RationalFunction, z) -> float:
    return float(np.max(np.abs(evaluate(f, z) - evaluate(g, z))))


def _perturbed(sys: orf.OrfSystem, eps: float) -> orf.OrfSystem:
    from dataclasses import replace

    phis = list(sys.phis)
    phis[1] = RationalFunction(phis[1].num + eps, phis[1].den_poles, phis[1].n)
    return replace(sys, phis=tuple(phis))


# ---------------------------------------------------------------- groups


def g_orthonormality(rng, perturb=False):
    worst = 0.0
    for _ in range(3):
        mu, seq = random_instance(rng, 8)
        for kind in "ABG":
            s = orf.build_system(mu, seq, 8, kind)
            if perturb:
                s = _perturbed(s, 1e-6)
            worst = max(worst, orf.orthonormality_error(s))
    return GroupResult("orthonormality", worst, 1e-10, "Gram matrix of kinds A/B/G vs identity")


def g_cholesky_oracle(rng, perturb=False):
    worst = 0.0
    z = circle_grid(64)
    for _ in range(3):
        mu, seq = random_instance(rng, 8)
        for kind in "AB":
            s = orf.build_system(mu, seq, 8, kind)
            ref = orf.cholesky_orf_values(mu, seq, 8, kind, z)
            worst = max(worst, float(np.max(np.abs(s.values(z) - ref))))
    return GroupResult("cholesky_oracle", worst, 1e-9, "Gram-Schmidt vs Cholesky of the exact Gram matrix")


def g_recurrence_replay(rng, perturb=False):
    worst = 0.0
    z = circle_grid(128)
    for _ in range(4):
        mu, seq = random_instance(rng, 10, zero_prob=0.15)
        for kind in "ABG":
            s = orf.build_system(mu, seq, 10, kind)
            phis, _ = orf.run_recurrence(s.seq, s.lambdas, s.es, s.etas1, kind)
            worst = max(worst, max(sup_diff(f, g, z) for f, g in zip(phis, s.phis)))
    return GroupResult("recurrence_replay", worst, 1e-9, "recurrence data replayed vs Gram-Schmidt")


def g_shifted_relations(rng, perturb=False):
    worst = 0.0
    for _ in range(3):
        mu, seq = random_instance(rng, 9, zero_prob=0.15)
        g = orf.build_system(mu, seq, 9, "G")
        a = g.alpha_system
        pts = list(0.9 * np.exp(2j * np.pi * rng.uniform(size=16)) * np.sqrt(rng.uniform(size=16)))
        pts += list(circle_grid(16))
        for z in pts:
            for k in range(10):
                bv = blaschke_products(g.seq, k, z)
                ref = a.phis[k](z) if k == 0 or g.seq.side_of(k) == "A" else a.phistars[k](z)
                worst = max(worst, abs(complex(g.phis[k](z)) - ref * bv.dBnB))
    return GroupResult("shifted_relations", worst, 1e-10, "mixed ORFs from disk-side ORFs times exterior Blaschke products")


def g_cd_forms(rng, perturb=False):
    worst = 0.0
    for _ in range(2):
        mu, seq = random_instance(rng, 7, zero_prob=0.2)
        s = orf.build_system(mu, seq, 7, "G")
        for _ in range(20):
            z, w = (complex(x) for x in 1.6 * (rng.normal(size=2) + 1j * rng.normal(size=2)) / 2)
            n = int(rng.integers(1, 6))
            ref = orf.cd_kernel(s, n, z, w, "sum")
            scale = max(abs(ref), 1.0)
            for form in ("first", "second"):
                try:
                    worst = max(worst, abs(orf.cd_kernel(s, n, z, w, form) - ref) / scale)
                except Exception:
                    pass
            c1 = orf.cd_numerator(s, n, z, w)
            c2 = orf.cd_numerator_sum(s, n, z, w)
            worst = max(worst, abs(c1 - c2) / max(abs(c2), 1.0))
        for z, w in ((INF, 0.3j), (0.2 - 0.1j, INF), (INF, INF)):
            c1 = orf.cd_numerator(s, 4, z, w)
            c2 = orf.cd_numerator_sum(s, 4, z, w)
            worst = max(worst, abs(c1 - c2) / max(abs(c2), 1.0))
    return GroupResult("cd_forms", worst, 1e-9, "CD sum vs closed forms and numerator form incl. infinite arguments")


def g_reproducing(rng, perturb=False):
    worst = 0.0
    mu, seq = random_instance(rng, 6)
    s = orf.build_system(mu, seq, 6, "G")
    for _ in range(10):
        w = complex(0.7 * (rng.normal() + 1j * rng.normal()) / 2)
        c = rng.normal(size=7) + 1j * rng.normal(size=7)
        vals_t = c @ s.values(mu.nodes)
        fw = complex(c @ s.values(w)[:, 0])
        # conj(k_n(t, w)) at the atoms
        kbar = np.conj(s.values(mu.nodes)).T @ s.values(w)[:, 0]
        ip = np.dot(mu.masses, kbar * vals_t)
        worst = max(worst, abs(ip - fw))
    return GroupResult("reproducing_kernel", worst, 1e-9, "<k_n(., w), f> = f(w)")


def g_lambda_relations(rng, perturb=False):
    worst = 0.0
    for _ in range(4):
        mu, seq = random_instance(rng, 10)
        g = orf.build_system(mu, seq, 10, "G")
        a = g.alpha_system
        for k in range(1, 11):
            lam = g.lambdas[k - 1]
            exp = expected_lambda(a.lambdas[k - 1], g.seq.side_of(k - 1), g.seq.side_of(k))
            if is_inf(lam) or is_inf(exp):
                worst = max(worst, 0.0 if is_inf(lam) and is_inf(exp) else np.inf)
                continue
            worst = max(worst, abs(lam - exp) / max(1.0, abs(exp)))
            inside = abs(lam) < 1
            same = g.seq.side_of(k - 1) == g.seq.side_of(k)
            if inside != same:
                worst = np.inf
    return GroupResult("lambda_relations", worst, 1e-10, "four side-pair rules and the disk/exterior regions")


def g_e_squared(rng, perturb=False):
    worst_e = np.inf
    replay = 0.0
    for _ in range(3):
        seq = random_sequence(rng, 9, zero_prob=0.2)
        lams = list(orf.random_params(rng, seq, "G"))
        switches = [k for k in range(1, 10) if seq.side_of(k) != seq.side_of(k - 1)]
        for k in switches[:2]:
            lams[k - 1] = INF
        s = orf.synthesize_from_params(lams, seq, "G")
        lam2, es, etas = orf.extract_recurrence_data(s)
        worst_e = min(worst_e, min(e * e for e in es))
        for k, (l1, l2) in enumerate(zip(lams, lam2)):
            if is_inf(l1) or is_inf(l2):
                replay = max(replay, 0.0 if is_inf(l1) and is_inf(l2) else np.inf)
            else:
                replay = max(replay, abs(l1 - l2) / max(1.0, abs(l1)))
    value = replay if worst_e > 0 else np.inf
    return GroupResult("e_squared_and_infinite_lambda", value, 1e-10,
                       f"min e^2 = {worst_e:.3g}; synthesized parameters recovered (incl. infinite)")


def g_eta_closed_form(rng, perturb=False):
    worst = 0.0
    for _ in range(3):
        mu, seq = random_instance(rng, 8)
        for kind in "AB":
            s = orf.build_system(mu, seq, 8, kind)
            for n in range(1, 9):
                e1 = orf._eta1_closed_form(s, n)
                if e1 is None:
                    continue
                e2 = orf._eta1_phase_fix(s, n, (s.phis[n - 1], s.phistars[n - 1]), s.lambdas[n - 1], s.es[n - 1])
                worst = max(worst, abs(e1 - e2))
    return GroupResult("eta_closed_form", worst, 1e-10, "closed-form phase vs normalization phase fix")


def g_quadrature(rng, perturb=False):
    worst = 0.0
    detail = []
    for _ in range(3):
        mu, seq = random_instance(rng, 8)
        s = orf.build_system(mu, seq, 8, "G")
        tau = np.exp(2j * np.pi * rng.uniform())
        for n in (4, 8):
            q = porf.quadrature(s, n, tau)
            worst = max(worst, float(np.max(np.abs(np.abs(q.nodes) - 1))))
            d = np.abs(q.nodes[:, None] - q.nodes[None, :]) + np.eye(n) * 10
            if d.min() <= 1e-8 or np.any(q.weights <= 0):
                worst = np.inf
            worst = max(worst, abs(q.weights.sum() - 1), porf.exactness_error(q, mu))
    detail.append("nodes on circle, simple; weights positive, sum 1; exact on the product space")
    return GroupResult("quadrature", worst, 1e-9, "; ".join(detail))


def g_weight_routes(rng, perturb=False):
    worst = 0.0
    for _ in range(3):
        mu, seq = random_instance(rng, 7)
        s = orf.build_system(mu, seq, 7, "G")
        tau = np.exp(2j * np.pi * rng.uniform())
        q = porf.quadrature(s, 7, tau)
        w2 = porf.weights_second_kind(s, q)
        worst = max(worst, float(np.max(np.abs(w2 - q.weights))))
        sn = matfac.snake_product(s.seq, s.alpha_system, 6, "phi")
        qs = matfac.spectral_quadrature(sn, s.seq, 6, np.exp(2j * np.pi * rng.uniform()))
        taup = -complex(s.phis[7](qs.nodes[0])) / complex(s.phistars[7](qs.nodes[0]))
        qk = porf.quadrature(s, 7, taup / abs(taup))
        dn, dw = porf.compare_quadratures(qs, qk)
        worst = max(worst, dn, dw)
    return GroupResult("weight_routes", worst, 1e-8, "kernel, second-kind and spectral weights agree")


def g_kind_invariance(rng, perturb=False):
    worst = 0.0
    for _ in range(4):
        mu, seq = random_instance(rng, 7)
        sysG = orf.build_system(mu, seq, 7, "G")
        sysA = orf.build_system(mu, seq, 7, "A")
        sysB = orf.build_system(mu, seq, 7, "B")
        n = 7
        tau = np.exp(2j * np.pi * rng.uniform())
        qG = porf.quadrature(sysG, n, tau)
        for s, k in ((sysA, "A"), (sysB, "B")):
            qk = porf.quadrature(s, n, porf.translate_tau(seq, n, tau, k))
            worst = max(worst, *porf.compare_quadratures(qG, qk))
    return GroupResult("kind_invariance", worst, 1e-8, "kinds A, B, G give one quadrature after parameter translation")


def g_shape_patterns(rng, perturb=False):
    worst = 0.0
    for _ in range(5):
        mu, seq = random_instance(rng, 9)
        s = orf.build_system(mu, seq, 9, "G")
        sn = matfac.snake_product(s.seq, s.alpha_system, 8, "phi")
        D = sn.dense()
        pat = matfac.predicted_pattern(sn.shape, sn.size)
        if np.any(~pat):
            worst = max(worst, float(np.max(np.abs(D[~pat]))))
    return GroupResult("shape_patterns", worst, 1e-13, "entries outside the predicted snake pattern")


def g_unitarity(rng, perturb=False):
    worst = 0.0
    for _ in range(4):
        mu, seq = random_instance(rng, 9)
        s = orf.build_system(mu, seq, 9, "G")
        for basis in ("phi", "varphi"):
            sn = matfac.snake_product(s.seq, s.alpha_system, 8, basis)
            U = matfac.truncations(sn, 8, "unitary", np.exp(2j * np.pi * rng.uniform()))
            worst = max(worst, matfac.unitarity_error(U),
                        matfac.unitarity_error(matfac.mobius(U, matfac.alpha_diagonal(s.seq, 8))))
    return GroupResult("unitarity", worst, 1e-12, "unitary truncations and their Mobius transforms")


def g_matrix_zeros(rng, perturb=False):
    worst = 0.0
    for _ in range(4):
        mu, seq = random_instance(rng, 9)
        s = orf.build_system(mu, seq, 9, "G")
        n = 8
        sn = matfac.snake_product(s.seq, s.alpha_system, n, "phi")
        ev = matfac.plain_zeros(sn, s.seq, n)
        zr = eig.poly_roots(s.alpha_system.phis[n + 1].num)
        worst = max(worst, porf.match_points(ev, zr)[1])
        U = matfac.mobius(matfac.truncations(sn, n, "unitary", 1.0), matfac.alpha_diagonal(s.seq, n))
        worst = max(worst, matfac.eigenvector_consistency(U, s))
        worst = max(worst, matfac.recurrence_identity_residual(s, sn, complex(0.4 - 0.3j)))
    return GroupResult("matrix_zeros", worst, 1e-8, "plain truncation eigenvalues, eigenvectors, recurrence identity")


def g_ampd(rng, perturb=False):
    worst = 0.0
    for k in (3, 5, 7):
        fs = ampd.random_factors(rng, k)
        A, D = ampd.random_diag(rng, k + 1), ampd.random_diag(rng, k + 1)
        ords = ampd.distinct_orderings(k)
        for trunc in (False, True):
            worst = max(worst, ampd.det_invariance(A, fs, D, ords, trunc)[1])
    return GroupResult("ampd_determinants", worst, 1e-9, "determinants across all orderings, plain and truncated")


def g_rampd(rng, perturb=False):
    worst = 0.0
    n = 6
    fs = ampd.random_factors(rng, n)
    diags = [ampd.random_diag(rng, n + 1) for _ in range(4)]
    worst = max(worst, ampd.rampd_invariance(*diags, fs, ampd.distinct_orderings(n))[1])
    al = random_alphas(rng, n + 1)
    rep = ampd.unitary_rampd_report(al, ampd.random_deltas(rng, n), ampd.distinct_orderings(n))
    worst = max(worst, rep["lambda_dev"], rep["absV_dev"])
    return GroupResult("rampd_invariance", worst, 1e-8, "RAMPD spectra and unitary |V| across orderings")


def g_eigensolver(rng, perturb=False):
    Z = rng.normal(size=(30, 30)) + 1j * rng.normal(size=(30, 30))
    Q, _ = np.linalg.qr(Z)
    T, U, w = eig.schur(Q)
    r1 = float(np.max(np.abs(np.abs(w) - 1)))
    r2 = float(np.linalg.norm(U @ T @ U.conj().T - Q) / np.linalg.norm(Q))
    roots = np.exp(2j * np.pi * rng.uniform(size=12)) * rng.uniform(0.3, 1.5, size=12)
    got = eig.poly_roots(np.polynomial.polynomial.polyfromroots(roots))
    r3 = porf.match_points(got, roots)[1]
    return GroupResult("eigensolver", max(r1, r2, r3), 1e-9, "unitary Schur and companion roots")


GROUPS = [
    g_orthonormality, g_cholesky_oracle, g_recurrence_replay, g_shifted_relations, g_cd_forms,
    g_reproducing, g_lambda_relations, g_e_squared, g_eta_closed_form, g_quadrature, g_weight_routes,
    g_kind_invariance, g_shape_patterns, g_unitarity, g_matrix_zeros, g_ampd, g_rampd, g_eigensolver,
]


def run_suite(seed: int = 0, perturb: bool = False, only=None) -> list:
    """Run every group with a generator seeded once; ``perturb`` corrupts one ORF."""
    rng = np.random.default_rng(seed)
    out = []
    for fn in GROUPS:
        name = fn.__name__[2:]
        if only and name not in only:
            continue
        try:
            res = fn(rng, perturb)
        except Exception as exc:  # a crash counts as a failed invariant
            res = GroupResult(name, np.inf, 0.0, f"{type(exc).__name__}: {exc}")
        out.append(res)
    return out


def summary(results) -> dict:
    return {"groups": [r.as_dict() for r in results],
            "passed": all(r.passed for r in results),
            "count": len(results)}
