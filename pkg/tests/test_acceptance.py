"""Acceptance criteria, one test (and one summary line) each."""

import itertools

import numpy as np
import pytest

from orfq import ampd, eig, matfac, orf, porf
from orfq.errors import BadSpec, DegenerateDenominator
from orfq.extc import INF, GammaSequence, blaschke_products, is_inf
from orfq.measure import random_discrete
from orfq.ratfun import evaluate, numerator_star
from orfq.verify import circle_grid, expected_lambda, random_alphas

GRID = circle_grid(128)


def _instances(seed, count, n, force_inf=False, N=60):
    """Discrete measures with mixed-side pole sequences, ``|alpha| <= 0.8``.

    With ``force_inf`` every sequence has poles at infinity (zero alphas on
    the exterior side) and an infinite starting pole.
    """
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        mu = random_discrete(0, N, rng=rng)
        alphas = list(random_alphas(rng, n, 0.8, 0.1))
        side = list(rng.choice(["A", "B"], size=n))
        if len(set(side)) == 1:
            side[int(rng.integers(n))] = "B" if side[0] == "A" else "A"
        g0 = "A" if rng.uniform() < 0.5 else "B"
        if force_inf:
            for j in rng.choice(n, size=max(2, n // 4), replace=False):
                alphas[j], side[j] = 0j, "B"
            g0 = "B"
        out.append((mu, GammaSequence(tuple(alphas), "".join(side), g0)))
    return out


def _rel(a, b):
    """Absolute error inside the disk, error of reciprocals (``1/inf = 0``) outside."""
    inv = [0j if is_inf(x) else complex(x) for x in (a, b)]
    if any(is_inf(x) or abs(x) > 1 for x in (a, b)):
        inv = [0j if is_inf(x) else 1 / complex(x) for x in (a, b)]
    return abs(inv[0] - inv[1])


# ------------------------------------------------------------------ checks


def check_recurrence_oracle(instances):
    worst = 0.0
    for mu, seq in instances:
        for kind in "GAB":
            s = orf.build_system(mu, seq, seq.N, kind)
            phis, _ = orf.run_recurrence(s.seq, s.lambdas, s.es, s.etas1, kind)
            for f, g in zip(phis, s.phis):
                worst = max(worst, float(np.max(np.abs(evaluate(f, GRID) - evaluate(g, GRID)))))
    return worst


def check_shifted_relations(instances, seed=0):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for mu, seq in instances:
        n = seq.N
        g = orf.build_system(mu, seq, n, "G")
        a, b = g.alpha_system, orf.build_system(mu, seq, n, "B")
        pts = list(1.4 * np.sqrt(rng.uniform(size=16)) * np.exp(2j * np.pi * rng.uniform(size=16)))
        pts += list(circle_grid(16))
        for k in range(1, n + 1):
            for z in pts:
                bv = blaschke_products(seq, k, z)
                ref = a.phis[k](z) if seq.side_of(k) == "A" else a.phistars[k](z)
                worst = max(worst, abs(g.phis[k](z) - ref * bv.dBnB))
            # numerator constants: -|beta_j| per exterior index, -1 for a pole at infinity
            cb = np.prod([-1 / abs(seq.alpha(j)) if seq.alpha(j) != 0 else -1.0
                          for j in range(1, k + 1) if seq.side_of(j) == "B"])
            ca = np.prod([-abs(seq.alpha(j)) if seq.alpha(j) != 0 else -1.0
                          for j in range(1, k + 1) if seq.side_of(j) == "A"])
            vs = np.prod([seq.sigma(j) for j in range(1, k + 1)])
            p = g.phis[k].num
            if seq.side_of(k) == "A":
                pairs = [(p, a.phis[k].num * cb), (p, numerator_star(b.phis[k].num, k) * vs * ca)]
            else:
                pairs = [(p, b.phis[k].num * ca), (p, numerator_star(a.phis[k].num, k) * vs * cb)]
            for u, v in pairs:
                worst = max(worst, float(np.max(np.abs(u - v))))
    return worst


def check_cd(instances, seed=0):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for mu, seq in instances:
        n = seq.N
        s = orf.build_system(mu, seq, n, "G")
        for _ in range(50):
            z, w = (complex(x) for x in 1.5 * (rng.normal(size=2) + 1j * rng.normal(size=2)) / 2)
            for m in range(n + 1):
                ref = orf.cd_kernel(s, m, z, w)
                scale = max(1.0, abs(ref))
                for form in ("first", "second"):
                    try:
                        worst = max(worst, abs(orf.cd_kernel(s, m, z, w, form) - ref) / scale)
                    except DegenerateDenominator:
                        pass
                c1, c2 = orf.cd_numerator(s, m, z, w), orf.cd_numerator_sum(s, m, z, w)
                worst = max(worst, abs(c1 - c2) / max(1.0, abs(c2)))
        for z, w in ((INF, 0.4 - 0.2j), (1.3j, INF), (INF, INF)):
            for m in range(n + 1):
                c1, c2 = orf.cd_numerator(s, m, z, w), orf.cd_numerator_sum(s, m, z, w)
                worst = max(worst, abs(c1 - c2) / max(1.0, abs(c2)))
        # reproducing property for random f in the span
        V = s.values(mu.nodes)
        for _ in range(10):
            w = complex(0.9 * (rng.normal() + 1j * rng.normal()) / 2)
            c = rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1)
            vw = s.values(w)[:, 0]
            kbar = np.conj(V).T @ vw
            worst = max(worst, abs(np.dot(mu.masses, kbar * (c @ V)) - c @ vw))
    return worst


def check_lambda_rules(instances):
    worst, min_e2 = 0.0, np.inf
    for mu, seq in instances:
        g = orf.build_system(mu, seq, seq.N, "G")
        a = g.alpha_system
        for k in range(1, seq.N + 1):
            lam = g.lambdas[k - 1]
            worst = max(worst, _rel(lam, expected_lambda(a.lambdas[k - 1], seq.side_of(k - 1), seq.side_of(k))))
            same = seq.side_of(k - 1) == seq.side_of(k)
            if not is_inf(lam) and (abs(lam) < 1) != same:
                worst = np.inf
        min_e2 = min(min_e2, min(e * e for e in g.es), min(e * e for e in a.es))
    return worst, min_e2


def check_infinite_parameters(seed, count=6, n=9):
    """Force infinite parameters at side switches, rebuild from the induced measure."""
    rng = np.random.default_rng(seed)
    worst, min_e2, forced = 0.0, np.inf, 0
    for _ in range(count):
        side = "AAB" + "".join(rng.choice(["A", "B"], size=n - 3))
        seq = GammaSequence(random_alphas(rng, n, 0.8), side, "A")
        lams = list(orf.random_params(rng, seq, "G"))
        switches = [k for k in range(1, n + 1) if seq.side_of(k) != seq.side_of(k - 1)]
        for k in switches[:2]:
            lams[k - 1] = INF
        s = orf.synthesize_from_params(lams, seq, "G")
        # a forced index k is non-regular: p_k^* vanishes at gamma_{k-1}
        for k in switches[:2]:
            worst = max(worst, abs(orf._pstar_at(s.phis[k].num, k, seq.gamma(k - 1))))
        min_e2 = min(min_e2, min(e * e for e in s.es))
        mu = orf.reconstruct_measure(s)
        g = orf.build_system(mu, seq, n - 1, "G")
        for k in switches[:2]:
            if k <= n - 1:
                forced += 1
                worst = max(worst, 0.0 if is_inf(g.lambdas[k - 1]) else np.inf)
        w, e2 = check_lambda_rules([(mu, seq.prefix(n - 1))])
        worst, min_e2 = max(worst, w), min(min_e2, e2)
    return worst, min_e2, forced


def check_quadrature(instances, seed=0):
    rng = np.random.default_rng(seed)
    unimod = sep_bad = sum_dev = exact = routes = 0.0
    for mu, seq in instances:
        n = seq.N
        s = orf.build_system(mu, seq, n, "G")
        for m in sorted({2, n // 2, n}):
            tau = np.exp(2j * np.pi * rng.uniform())
            q = porf.quadrature(s, m, tau)
            raw = eig.poly_roots(s.phis[m].num + tau * s.phistars[m].num)
            unimod = max(unimod, float(np.max(np.abs(np.abs(raw) - 1))))
            d = np.abs(q.nodes[:, None] - q.nodes[None, :]) + 10 * np.eye(m)
            if d.min() <= 1e-8 or np.any(q.weights <= 0):
                sep_bad = np.inf
            sum_dev = max(sum_dev, abs(q.weights.sum() - 1))
            exact = max(exact, porf.exactness_error(q, mu))
            w2 = porf.weights_second_kind(s, q)
            routes = max(routes, float(np.max(np.abs(w2 - q.weights))))
            sn = matfac.snake_product(seq, s.alpha_system, m - 1, "phi")
            qs = matfac.spectral_quadrature(sn, seq, m - 1, np.exp(2j * np.pi * rng.uniform()))
            tp = s.phis[m](qs.nodes[0]) / s.phistars[m](qs.nodes[0])
            qk = porf.quadrature(s, m, -tp / abs(tp))
            routes = max(routes, *porf.compare_quadratures(qs, qk))
    return {"unimodular": unimod, "separation": sep_bad, "weight_sum": sum_dev,
            "exactness": exact, "weight_routes": routes}


def check_kind_invariance(instances, seed=0):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for mu, seq in instances:
        n = seq.N
        tau = np.exp(2j * np.pi * rng.uniform())
        qg = porf.quadrature(orf.build_system(mu, seq, n, "G"), n, tau)
        for kind in "AB":
            qk = porf.quadrature(orf.build_system(mu, seq, n, kind), n, porf.translate_tau(seq, n, tau, kind))
            worst = max(worst, *porf.compare_quadratures(qg, qk))
    return worst


def check_matrix_route(instances, seed=0):
    rng = np.random.default_rng(seed)
    zeros = porf_dev = unit = pattern = 0.0
    for mu, seq in instances:
        N = seq.N
        s = orf.build_system(mu, seq, N, "G")
        for n in range(1, N):
            sn = matfac.snake_product(seq, s.alpha_system, n, "phi")
            ev = matfac.plain_zeros(sn, seq, n)
            zeros = max(zeros, porf.match_points(ev, eig.poly_roots(s.alpha_system.phis[n + 1].num))[1])
            U = matfac.mobius(matfac.truncations(sn, n, "unitary", np.exp(2j * np.pi * rng.uniform())),
                              matfac.alpha_diagonal(seq, n))
            unit = max(unit, matfac.unitarity_error(U))
            w = eig.eigvals(U)
            tp = s.phis[n + 1](w[0]) / s.phistars[n + 1](w[0])
            porf_dev = max(porf_dev, porf.match_points(w, porf.porf_zeros(s, n + 1, -tp / abs(tp)))[1])
            D = sn.dense()
            unit = max(unit, matfac.unitarity_error(matfac.mobius(D, matfac.alpha_diagonal(seq, n))))
            pat = matfac.predicted_pattern(sn.shape, sn.size)
            if np.any(~pat):
                pattern = max(pattern, float(np.max(np.abs(D[~pat]))))
    return {"plain_zeros": zeros, "unitary_zeros": porf_dev, "unitarity": unit, "pattern": pattern}


# ------------------------------------------------------------------ criteria


def test_criterion_01_recurrence_reproduces_gram_schmidt(report):
    insts = [_instances(seed, 1, int(np.random.default_rng(seed).integers(6, 13)))[0] for seed in range(20)]
    assert report(1, "recurrence replay vs Gram-Schmidt (20 seeds, 128-point grid)",
                  check_recurrence_oracle(insts), 1e-9)


def test_criterion_02_shifted_relations(report):
    assert report(2, "mixed ORFs from disk-side ORFs and numerator constants (32 points)",
                  check_shifted_relations(_instances(102, 8, 10)), 1e-10)


def test_criterion_03_christoffel_darboux(report):
    assert report(3, "CD sum, closed and numerator forms, infinite arguments, reproducing property",
                  check_cd(_instances(103, 4, 7), seed=3), 1e-9)


def test_criterion_04_parameter_regions(report):
    worst, e2 = check_lambda_rules(_instances(104, 20, 10))
    w2, e2b, forced = check_infinite_parameters(204)
    ok = worst <= 1e-10 and w2 <= 1e-10 and min(e2, e2b) > 0 and forced > 0
    assert report(4, f"side-pair parameter rules, infinite parameters ({forced} forced), min e^2={min(e2, e2b):.2e}",
                  max(worst, w2), 1e-10, ok)


def test_criterion_05_quadrature(report):
    r = check_quadrature(_instances(105, 8, 10), seed=5)
    tol = {"unimodular": 1e-10, "separation": 0.0, "weight_sum": 1e-10, "exactness": 1e-9, "weight_routes": 1e-8}
    ok = all(r[k] <= tol[k] for k in tol)
    assert report(5, "quadrature " + ", ".join(f"{k}={v:.1e}" for k, v in r.items()),
                  max(r["unimodular"], r["weight_sum"], r["exactness"], r["weight_routes"], r["separation"]),
                  1e-8, ok)


def test_criterion_06_kind_invariance(report):
    assert report(6, "kinds A, B, G give one quadrature (10 random shapes)",
                  check_kind_invariance(_instances(106, 10, 8), seed=6), 1e-8)


def test_criterion_07_matrix_route(report):
    r = check_matrix_route(_instances(107, 3, 11), seed=7)
    tol = {"plain_zeros": 1e-8, "unitary_zeros": 1e-8, "unitarity": 1e-12, "pattern": 1e-13}
    ok = all(r[k] <= tol[k] for k in tol)
    assert report(7, "matrix route (plain truncation vs disk-side zeros) " + ", ".join(f"{k}={v:.1e}" for k, v in r.items()),
                  max(r["plain_zeros"], r["unitary_zeros"]), 1e-8, ok)


def test_criterion_08_ordering_invariance(report):
    rng = np.random.default_rng(108)
    worst_det = 0.0
    # the explicit two-factor 3x3 case
    F = ampd.random_factors(rng, 2)
    a, d = ampd.random_diag(rng, 3), ampd.random_diag(rng, 3)
    worst_det = max(worst_det, ampd.det_invariance(a, F, d, [(1, 2), (2, 1)])[1])
    for k in range(1, 8):
        F = ampd.random_factors(rng, k)
        a, d = ampd.random_diag(rng, k + 1), ampd.random_diag(rng, k + 1)
        for trunc in (False, True):
            worst_det = max(worst_det, ampd.det_invariance(a, F, d, ampd.distinct_orderings(k), trunc)[1])
    worst_eig = 0.0
    for n in range(2, 15):
        F = ampd.random_factors(rng, n - 1)
        A, B, C, D = (ampd.random_diag(rng, n) for _ in range(4))
        orders = ampd.distinct_orderings(n - 1) if n <= 8 else ampd.sample_orderings(n - 1, 24, rng)
        worst_eig = max(worst_eig, ampd.rampd_invariance(A, B, C, D, F, orders)[1])
    worst_v = 0.0
    for n in (3, 6, 9, 14):
        al = 0.8 * np.sqrt(rng.uniform(size=n)) * np.exp(2j * np.pi * rng.uniform(size=n))
        orders = ampd.distinct_orderings(n - 1) if n <= 9 else ampd.sample_orderings(n - 1, 24, rng)
        rep = ampd.unitary_rampd_report(al, ampd.random_deltas(rng, n - 1, 0.9), orders)
        worst_v = max(worst_v, rep["lambda_dev"], rep["absV_dev"])
    ok = worst_det <= 1e-9 and worst_eig <= 1e-8 and worst_v <= 1e-8
    assert report(8, f"orderings: det={worst_det:.1e}, spectra={worst_eig:.1e}, unitary |V|={worst_v:.1e}",
                  max(worst_det, worst_eig, worst_v), 1e-8, ok)


def test_criterion_09_eigensolver(report):
    rng = np.random.default_rng(109)
    Q, R = np.linalg.qr(rng.normal(size=(50, 50)) + 1j * rng.normal(size=(50, 50)))
    U = Q * (np.diag(R) / np.abs(np.diag(R)))
    T, Z, w = eig.schur(U)
    circle = float(np.max(np.abs(np.abs(w) - 1)))
    resid = float(np.linalg.norm(Z @ T @ Z.conj().T - U) / np.linalg.norm(U))
    roots_dev = 0.0
    for deg in (1, 5, 12, 20):
        r = rng.uniform(0.4, 1.6, size=deg) * np.exp(2j * np.pi * rng.uniform(size=deg))
        roots_dev = max(roots_dev, porf.match_points(eig.poly_roots(np.polynomial.polynomial.polyfromroots(r)), r)[1])
    ok = circle <= 1e-10 and resid <= 1e-11 and roots_dev <= 1e-8
    assert report(9, f"eigensolver: circle={circle:.1e}, Schur residual={resid:.1e}, roots={roots_dev:.1e}",
                  max(circle, resid, roots_dev), 1e-8, ok)


def test_criterion_10_infinite_poles(report):
    insts = _instances(110, 4, 8, force_inf=True)
    assert all(any(is_inf(g) for g in seq.gammas) for _, seq in insts)
    parts = {
        "1": (check_recurrence_oracle(insts), 1e-9),
        "2": (check_shifted_relations(insts), 1e-10),
        "3": (check_cd(insts[:2]), 1e-9),
        "4": (check_lambda_rules(insts)[0], 1e-10),
        "6": (check_kind_invariance(insts), 1e-8),
    }
    q = check_quadrature(insts[:2])
    parts["5"] = (max(q["unimodular"], q["weight_sum"], q["separation"], q["exactness"], q["weight_routes"]), 1e-8)
    m = check_matrix_route(insts[:2])
    parts["7"] = (max(m["plain_zeros"], m["unitary_zeros"]), 1e-8)
    rejected = 0
    for pole in (1 + 1e-13, np.exp(0.3j) * (1 - 5e-13), -1.0):
        try:
            GammaSequence.from_gammas([0.2, pole])
        except BadSpec:
            rejected += 1
    ok = all(v <= t for v, t in parts.values()) and rejected == 3
    assert report(10, "infinite poles through checks 1-7 (" + ", ".join(f"{k}:{v:.0e}" for k, (v, _) in parts.items())
                  + f"), near-circle poles rejected {rejected}/3; worst is error/tolerance",
                  max(v / t for v, t in parts.values()), 1.0, ok)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
