import numpy as np
import pytest

from orfq import eig, matfac, orf, porf
from orfq.errors import ParamRegionViolation, SingularResolvent
from orfq.extc import INF, GammaSequence
from orfq.measure import lebesgue
from orfq.verify import random_instance, random_sequence
from orfq.measure import random_discrete


def unit(rng):
    return np.exp(2j * np.pi * rng.uniform())


def test_zero_parameter_block():
    assert np.allclose(matfac.gtilde_alpha(0, 1, 1, 1), [[0, 1], [1, 0]])


def test_infinite_parameter_block(rng):
    e, sp, sn = unit(rng), unit(rng), unit(rng)
    g = matfac.gtilde_alpha(INF, e, sp, sn)
    assert np.allclose(g, np.conj(sp) * np.conj(e) * np.array([[0, sn], [1, 0]]))


def test_blocks_unitary(rng):
    for _ in range(50):
        lam = 0.99 * np.sqrt(rng.uniform()) * unit(rng)
        g = matfac.gtilde_alpha(lam, unit(rng), unit(rng), unit(rng))
        assert matfac.unitarity_error(g) < 1e-14
    with pytest.raises(ParamRegionViolation):
        matfac.gtilde_alpha(1.2, 1, 1, 1)


def test_beta_conjugation(rng):
    g = matfac.gtilde_alpha(0.3 - 0.4j, unit(rng), unit(rng), unit(rng))
    assert np.allclose(matfac.gtilde_beta(g, 1.0), g)
    s = unit(rng)
    h = matfac.gtilde_beta(g, s)
    assert np.allclose(np.abs(h), np.abs(g))
    assert np.allclose(matfac.gtilde_beta(h, np.conj(s)), g)


def test_order_from_shape():
    assert matfac.order_from_shape("AAAA") == (1, 2, 3, 4)
    assert matfac.order_from_shape("BBBB") == (4, 3, 2, 1)
    assert matfac.order_from_shape("ABAB") == (3, 1, 2, 4)


def _snake(rng, side, n=None):
    n = len(side) - 1 if n is None else n
    mu = random_discrete(int(rng.integers(1 << 30)), 60)
    seq = random_sequence(rng, len(side), side=side)
    s = orf.build_system(mu, seq, len(side), "G")
    return s, matfac.snake_product(seq, s.alpha_system, n, "phi")


def test_all_disk_side_is_hessenberg(rng):
    _, sn = _snake(rng, "A" * 8)
    D = sn.dense()
    assert np.max(np.abs(np.tril(D, -2))) < 1e-14
    assert np.all(np.abs(np.diag(D, -1)) > 1e-6)


def test_alternating_is_five_diagonal(rng):
    _, sn = _snake(rng, "ABABABAB")
    D = sn.dense()
    i, j = np.indices(D.shape)
    assert np.max(np.abs(D[np.abs(i - j) > 2])) < 1e-14
    fs = {f.k: f.dense(sn.size) for f in sn.factors if f.k < sn.size}
    odd = np.eye(sn.size, dtype=complex)
    even = np.eye(sn.size, dtype=complex)
    for k, F in sorted(fs.items()):
        if k % 2:
            odd = odd @ F
        else:
            even = even @ F
    assert np.allclose(D, odd @ even, atol=1e-14)


def test_patterns_on_random_shapes():
    rng = np.random.default_rng(77)
    for _ in range(10):
        side = "".join(rng.choice(["A", "B"], size=9))
        _, sn = _snake(rng, side)
        D = sn.dense()
        pat = matfac.predicted_pattern(sn.shape, sn.size)
        assert np.all(np.abs(D[~pat]) <= 1e-13)
        assert np.all(np.abs(D[pat]) > 1e-12)


def test_pattern_ascii():
    assert matfac.pattern_ascii(np.array([[1, 0], [0, 2]])) == "x .\n. x"


def test_mobius_identities(rng):
    G = np.linalg.qr(rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8)))[0]
    assert np.allclose(matfac.mobius(G, np.zeros(8)), G)
    a = 0.8 * np.sqrt(rng.uniform(size=8)) * np.exp(2j * np.pi * rng.uniform(size=8))
    assert matfac.unitarity_error(matfac.mobius(G, a)) < 1e-12
    eta = np.diag(np.sqrt(1 - np.abs(a) ** 2))
    ref = np.linalg.inv(eta) @ (np.eye(8) + np.diag(a)) @ np.linalg.inv(np.eye(8) + np.diag(np.conj(a))) @ eta
    assert np.allclose(matfac.mobius(np.eye(8), a), ref)


def test_mobius_rejects_bad_input():
    with pytest.raises(ParamRegionViolation):
        matfac.mobius(np.eye(2), [0, 1.0])
    with pytest.raises(SingularResolvent):
        matfac.mobius(-2 * np.eye(2), [0.5, 0.5])


def test_unitary_truncation(rng):
    s, sn = _snake(rng, "AAAAAAA", 6)
    U = matfac.truncations(sn, 6, "unitary", unit(rng))
    assert matfac.unitarity_error(U) < 1e-13
    assert np.max(np.abs(np.tril(U, -2))) < 1e-14


def test_plain_truncation_with_zero_last_parameter():
    seq = GammaSequence((0.2, 0.1j, 0.3, -0.2), "AAAA")
    s = orf.synthesize_from_params([0.3, 0.2j, -0.1, 0.0], seq, "A")
    sn = matfac.snake_product(seq, s, 3, "phi")
    P = matfac.truncations(sn, 3, "plain")
    assert np.linalg.norm(P[:, -1]) < 1 - 1e-3


@pytest.mark.parametrize("n", [1, 4, 7, 10])
def test_plain_eigenvalues_are_disk_side_zeros(n):
    rng = np.random.default_rng(n)
    mu, seq = random_instance(rng, n + 1, zero_prob=0.15)
    s = orf.build_system(mu, seq, n + 1, "G")
    sn = matfac.snake_product(seq, s.alpha_system, n, "phi")
    ev = matfac.plain_zeros(sn, seq, n)
    zr = eig.poly_roots(s.alpha_system.phis[n + 1].num)
    assert porf.match_points(ev, zr)[1] < 1e-8


def test_lebesgue_spectral_rule():
    seq = GammaSequence((0j,) * 4, "AAAA")
    s = orf.build_system(lebesgue(64), seq, 4, "A")
    sn = matfac.snake_product(seq, s, 3, "phi")
    q = matfac.spectral_quadrature(sn, seq, 3, np.exp(0.3j))
    t = -q.nodes[0] ** 4
    assert np.max(np.abs(q.nodes ** 4 + t)) < 1e-12
    assert np.allclose(q.weights, 0.25, atol=1e-12)


def test_spectral_route_matches_numerator_route():
    rng = np.random.default_rng(11)
    for _ in range(20):
        mu, seq = random_instance(rng, 7, zero_prob=0.15)
        s = orf.build_system(mu, seq, 7, "G")
        sn = matfac.snake_product(seq, s.alpha_system, 6, "phi")
        qs = matfac.spectral_quadrature(sn, seq, 6, unit(rng))
        x0 = qs.nodes[0]
        tp = -s.phis[7](x0) / s.phistars[7](x0)
        qk = porf.quadrature(s, 7, tp / abs(tp))
        dn, dw = porf.compare_quadratures(qs, qk)
        assert dn < 1e-8 and dw < 1e-8


def test_eigenvectors_and_recurrence_identity(rng):
    s, sn = _snake(rng, "AABBABAAB")
    n = 8
    U = matfac.mobius(matfac.truncations(sn, n, "unitary", unit(rng)), matfac.alpha_diagonal(s.seq, n))
    assert matfac.eigenvector_consistency(U, s) < 1e-8
    for z in (0.4 - 0.3j, 1.2j):
        assert matfac.recurrence_identity_residual(s, sn, z) < 1e-9


def test_varphi_basis_also_unitary(rng):
    s, _ = _snake(rng, "ABBABA")
    sn = matfac.snake_product(s.seq, s.alpha_system, 5, "varphi")
    assert matfac.unitarity_error(sn.dense()) < 1e-13
