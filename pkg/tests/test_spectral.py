import math

import numpy as np
import pytest
from scipy import integrate

from rmtlab.ensembles import DistSpec, ParameterError, sample_wigner
from rmtlab.spectral import (
    ContractError,
    DomainError,
    check_hermitian,
    count_interval,
    eig_decompose,
    ks_distance,
    max_gap,
    mp_edges,
    mp_interval_mass,
    pv_semicircle,
    pv_semicircle_numeric,
    rho_mp,
    rho_sc,
    sc_interval_mass,
    semicircle_quantiles,
    stieltjes_empirical,
    stieltjes_mp,
    stieltjes_sc,
)


def test_check_hermitian_rejects():
    with pytest.raises(ContractError):
        check_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(ContractError):
        check_hermitian(np.ones((2, 3)))


def test_eig_decompose_reconstructs():
    w = sample_wigner(DistSpec("gaussian"), 30, 3)
    d = eig_decompose(w)
    recon = (d.eigenvectors * d.eigenvalues) @ d.eigenvectors.T
    np.testing.assert_allclose(recon, w, atol=1e-12)
    assert np.all(np.diff(d.eigenvalues) >= 0)


def test_count_interval_half_open():
    eigs = np.array([0.0, 1.0, 1.0, 2.0])
    assert count_interval(eigs, 0.0, 1.0) == 1
    assert count_interval(eigs, 0.0, 1.0 + 1e-12) == 3
    assert count_interval(eigs, -5.0, 5.0) == 4
    with pytest.raises(ContractError):
        count_interval(eigs, 2.0, 1.0)
    with pytest.raises(ContractError):
        count_interval(eigs[::-1], 0.0, 1.0)


def test_rho_sc_values():
    assert rho_sc(0.0) == pytest.approx(1.0 / math.pi)
    assert rho_sc(2.0) == 0.0
    assert rho_sc(2.5) == 0.0
    arr = rho_sc(np.array([-3.0, 0.0, 3.0]))
    np.testing.assert_allclose(arr, [0.0, 1.0 / math.pi, 0.0])


def test_sc_mass_total_and_symmetry():
    assert sc_interval_mass(-2.0, 2.0) == pytest.approx(1.0, abs=1e-14)
    assert sc_interval_mass(-1.0, 0.0) == pytest.approx(sc_interval_mass(0.0, 1.0), abs=1e-14)
    assert sc_interval_mass(-5.0, -2.0) == 0.0


def test_sc_mass_matches_quadrature():
    for lo, hi in [(-1.3, 0.4), (1.5, 2.0), (-2.0, -1.9)]:
        ref, _ = integrate.quad(rho_sc, lo, hi, epsabs=1e-12)
        assert sc_interval_mass(lo, hi) == pytest.approx(ref, abs=1e-10)


def test_stieltjes_sc_golden_point():
    # s(i) = i*(sqrt(5)-1)/2
    val = stieltjes_sc(1j)
    assert val == pytest.approx(1j * (math.sqrt(5.0) - 1.0) / 2.0, abs=1e-14)


def test_stieltjes_sc_self_consistency_and_herglotz():
    for z in (0.5 + 0.1j, -1.9 + 0.01j, 3.0 + 1.0j, 1e-3j + 2.0):
        s = stieltjes_sc(z)
        assert abs(s + 1.0 / (z + s)) < 1e-12
        assert s.imag > 0


def test_stieltjes_sc_matches_integral():
    z = 0.7 + 0.3j
    re, _ = integrate.quad(lambda x: rho_sc(x) * ((x - z.real) / abs(x - z) ** 2), -2, 2, epsabs=1e-12)
    im, _ = integrate.quad(lambda x: rho_sc(x) * (z.imag / abs(x - z) ** 2), -2, 2, epsabs=1e-12)
    assert stieltjes_sc(z) == pytest.approx(re + 1j * im, abs=1e-9)


def test_stieltjes_requires_upper_half_plane():
    for f in (stieltjes_sc, lambda z: stieltjes_mp(z, 0.5), lambda z: stieltjes_empirical(np.array([0.0]), z)):
        with pytest.raises(DomainError):
            f(1.0 - 0.5j)


def test_stieltjes_empirical_two_atoms():
    eigs = np.array([-1.0, 1.0])
    z = 0.5j
    expected = 0.5 * (1.0 / (-1.0 - z) + 1.0 / (1.0 - z))
    assert stieltjes_empirical(eigs, z) == pytest.approx(expected, abs=1e-15)


def test_mp_edges():
    a, b = mp_edges(0.25)
    assert a == pytest.approx(0.25)
    assert b == pytest.approx(2.25)
    assert mp_edges(1.0) == (0.0, 4.0)
    with pytest.raises(ParameterError):
        mp_edges(1.5)


@pytest.mark.parametrize("y", [0.25, 0.5, 1.0])
def test_rho_mp_normalizes(y):
    a, b = mp_edges(y)
    mass, _ = integrate.quad(lambda x: rho_mp(x, y), a, b, epsabs=1e-10, limit=200)
    assert mass == pytest.approx(1.0, abs=1e-8)
    assert mp_interval_mass(a, b, y) == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("y", [0.25, 0.5, 1.0])
def test_stieltjes_mp_self_consistency(y):
    a, b = mp_edges(y)
    for z in (a + 0.3 + 0.05j, (a + b) / 2 + 0.01j, b + 1.0 + 1.0j):
        s = stieltjes_mp(z, y)
        assert abs(s + 1.0 / (y + z - 1.0 + y * z * s)) < 1e-12
        assert s.imag > 0


def test_stieltjes_mp_matches_integral():
    y = 0.5
    a, b = mp_edges(y)
    z = 1.2 + 0.2j

    def integrand_re(x):
        return rho_mp(x, y) * (x - z.real) / abs(x - z) ** 2

    def integrand_im(x):
        return rho_mp(x, y) * z.imag / abs(x - z) ** 2

    re, _ = integrate.quad(integrand_re, a, b, epsabs=1e-11, limit=300)
    im, _ = integrate.quad(integrand_im, a, b, epsabs=1e-11, limit=300)
    assert stieltjes_mp(z, y) == pytest.approx(re + 1j * im, abs=1e-8)


def test_pv_semicircle_inside_is_linear():
    for lam in (0.0, 0.5, -1.7, 2.0):
        assert pv_semicircle(lam) == pytest.approx(-lam / 2.0)


def test_pv_semicircle_outside_decays():
    assert pv_semicircle(3.0) == pytest.approx(-1.5 + math.sqrt(5.0) / 2.0)
    assert pv_semicircle(-3.0) == -pv_semicircle(3.0)
    # behaves like -1/lam at large |lam| (Stieltjes decay)
    assert pv_semicircle(100.0) == pytest.approx(-1.0 / 100.0, rel=1e-3)


@pytest.mark.parametrize("lam", [0.0, 1.0, -1.0, 1.9, -1.9, 3.0, -3.0])
def test_pv_semicircle_matches_numeric_oracle(lam):
    assert pv_semicircle(lam) == pytest.approx(pv_semicircle_numeric(lam), abs=1e-6)


def test_pv_numeric_rejects_bad_excision():
    with pytest.raises(ParameterError):
        pv_semicircle_numeric(0.0, excision=0.0)


def test_max_gap_simple():
    eigs = np.array([0.0, 0.1, 0.5, 0.6])
    assert max_gap(eigs, -1.0, 1.0) == pytest.approx(0.4)
    assert max_gap(eigs, 0.05, 0.55) == pytest.approx(0.4)
    with pytest.raises(ContractError):
        max_gap(eigs, 0.55, 0.65)  # only one inside


def test_semicircle_quantiles_are_quantiles():
    q = semicircle_quantiles(101)
    assert np.all(np.diff(q) > 0)
    assert abs(q[50]) < 1e-9  # median is 0
    # CDF at each atom equals (i + 1/2)/n
    for i in (0, 25, 100):
        mass = sc_interval_mass(-2.0, q[i]) if q[i] > -2 else 0.0
        assert mass == pytest.approx((i + 0.5) / 101, abs=1e-8)


def test_ks_distance_exact_on_quantiles():
    # atoms at quantile midpoints give KS = 1/(2n) exactly
    n = 50
    q = semicircle_quantiles(n)
    d = ks_distance(q, lambda x: sc_interval_mass(-2.0, x) if x > -2 else 0.0)
    assert d == pytest.approx(1.0 / (2 * n), abs=1e-6)


def test_ks_distance_degenerate():
    # one atom at 5 vs a unit step at 0: the gap just left of the atom is 1
    d = ks_distance(np.array([5.0]), lambda x: 0.0 if x < 0 else 1.0)
    assert d == pytest.approx(1.0, abs=1e-12)


def test_wigner_esd_converges_in_ks():
    w = sample_wigner(DistSpec("gaussian"), 800, 4)
    eigs = np.linalg.eigvalsh(w)
    d = ks_distance(eigs, lambda x: sc_interval_mass(-2.0, x) if x > -2 else (0.0 if x <= -2 else 1.0))
    assert d < 0.06
