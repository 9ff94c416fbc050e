import numpy as np
import pytest

from elphase.thermo import (Mixture, blended_modulus, chemical_potentials,
                            dfree_dchi, double_well, free_charge_density,
                            free_energy_density, interpolation, mu_jacobian,
                            phase_free_energy, pressure)


def make_mixture(n=2, **kw):
    base = dict(
        masses=np.arange(1.0, n + 1.0),
        charges=np.zeros(n),
        psi_ref=np.zeros(n),
        k_liquid=4.0,
        k_vapor=1.0,
    )
    base.update(kw)
    return Mixture(**base)


def random_mixture(rng, n):
    charges = rng.integers(-2, 3, size=n).astype(float)
    charges[-1] -= charges.sum()   # keep a neutral species mix available
    return Mixture(
        masses=rng.uniform(0.5, 3.0, n),
        charges=charges,
        psi_ref=rng.uniform(-1.0, 1.0, n),
        k_liquid=rng.uniform(0.5, 5.0),
        k_vapor=rng.uniform(0.5, 5.0),
        n_ref=rng.uniform(0.5, 2.0),
        p_ref=rng.uniform(0.5, 2.0),
        kT=rng.uniform(0.5, 2.0),
        s_liquid=rng.uniform(0.0, 1.0),
        s_vapor=rng.uniform(0.0, 1.0),
    )


# ---------------------------------------------------------- double well

def test_double_well_frozen_values():
    chi = np.array([-1.0, 0.0, 0.5, 1.0])
    w, dw, ddw = double_well(chi)
    assert np.allclose(w, [0.0, 1.0, 0.5625, 0.0], atol=0, rtol=0)
    assert np.allclose(dw, [0.0, 0.0, -1.5, 0.0], atol=0, rtol=0)
    assert ddw[0] == 8.0 and ddw[-1] == 8.0

def test_double_well_derivative_consistency():
    chi = np.linspace(-1.5, 1.5, 31)
    h = 1e-6
    wp, _, _ = double_well(chi + h)
    wm, _, _ = double_well(chi - h)
    _, dw, ddw = double_well(chi)
    assert np.abs((wp - wm) / (2 * h) - dw).max() < 1e-8
    _, dwp, _ = double_well(chi + h)
    _, dwm, _ = double_well(chi - h)
    assert np.abs((dwp - dwm) / (2 * h) - ddw).max() < 1e-7


# ---------------------------------------------------------- interpolation

def test_interpolation_endpoints_and_midpoint():
    chi = np.array([-1.0, 0.0, 1.0])
    h, dh, ddh = interpolation(chi)
    assert np.allclose(h, [0.0, 0.5, 1.0], atol=0)
    assert dh[0] == 0.0 and dh[2] == 0.0
    assert ddh[0] == 0.0 and ddh[2] == 0.0

def test_interpolation_clamps_outside():
    h, dh, ddh = interpolation(np.array([-2.0, 3.5]))
    assert np.all(h == [0.0, 1.0]) and np.all(dh == 0.0) and np.all(ddh == 0.0)

def test_interpolation_monotone_and_smooth():
    chi = np.linspace(-1.3, 1.3, 401)
    h, dh, ddh = interpolation(chi)
    assert np.all(dh >= 0.0)
    fd = np.gradient(h, chi)
    # interior only: np.gradient is first order at the ends
    assert np.abs(fd[1:-1] - dh[1:-1]).max() < 5e-4
    fd2 = np.gradient(dh, chi)
    # exclude stencils that straddle the clamp points: ddh is continuous
    # there but its own derivative jumps
    inner = (np.abs(np.abs(chi) - 1.0) > 2 * (chi[1] - chi[0]))
    inner[[0, -1]] = False
    assert np.abs(fd2[inner] - ddh[inner]).max() < 5e-3


# ---------------------------------------------------------- free energy

def test_phase_free_energy_reference_point():
    # at n = n_ref with a single species the logs vanish and only the
    # reference free energy remains
    mix = make_mixture(n=1, masses=np.array([2.0]), psi_ref=np.array([0.7]))
    rho = np.array([2.0])   # n = 1 = n_ref
    assert phase_free_energy(mix, rho, "liquid") == pytest.approx(1.4, abs=1e-14)
    assert phase_free_energy(mix, rho, "vapor") == pytest.approx(1.4, abs=1e-14)

def test_free_energy_blends_between_phases():
    mix = make_mixture()
    rho = np.array([0.3, 0.9])
    fl = phase_free_energy(mix, rho, "liquid")
    fv = phase_free_energy(mix, rho, "vapor")
    assert free_energy_density(mix, rho, 1.0) == pytest.approx(fl, rel=1e-14)
    assert free_energy_density(mix, rho, -1.0) == pytest.approx(fv, rel=1e-14)
    mid = free_energy_density(mix, rho, 0.0)
    assert mid == pytest.approx(0.5 * (fl + fv), rel=1e-12)

def test_blended_modulus_endpoints():
    mix = make_mixture()
    k = blended_modulus(mix, np.array([-1.0, 1.0]))
    assert np.allclose(k, [1.0, 4.0], atol=0)


# ---------------------------------------------------------- potentials

def test_chemical_potential_matches_free_energy_gradient():
    rng = np.random.default_rng(7)
    for n in (1, 2, 3):
        for _ in range(20):
            mix = random_mixture(rng, n)
            rho = rng.uniform(0.2, 2.0, n)
            chi = rng.uniform(-1.2, 1.2)
            mu = chemical_potentials(mix, rho, chi)
            h = 1e-6
            for a in range(n):
                dp = rho.copy(); dp[a] += h
                dm = rho.copy(); dm[a] -= h
                fd = (free_energy_density(mix, dp, chi)
                      - free_energy_density(mix, dm, chi)) / (2 * h)
                assert abs(mu[a] - fd) < 1e-6 * max(1.0, abs(fd))

def test_pressure_is_gibbs_duhem_combination():
    rng = np.random.default_rng(8)
    for n in (1, 2, 3):
        for _ in range(20):
            mix = random_mixture(rng, n)
            rho = rng.uniform(0.2, 2.0, n)
            chi = rng.uniform(-1.2, 1.2)
            mu = chemical_potentials(mix, rho, chi)
            f = free_energy_density(mix, rho, chi)
            p = pressure(mix, rho, chi)
            assert abs(p - (rho @ mu - f)) < 1e-12 * max(1.0, abs(p))

def test_pressure_closed_form():
    # independent oracle: p = p_ref + K(chi) (n/n_ref - 1)
    mix = make_mixture(n_ref=0.8, p_ref=1.3)
    rho = np.array([0.5, 1.0])
    n = 0.5 / 1.0 + 1.0 / 2.0
    for chi in (-1.0, 0.2, 1.0):
        k = blended_modulus(mix, chi)
        expect = 1.3 + k * (n / 0.8 - 1.0)
        assert pressure(mix, rho, chi) == pytest.approx(expect, rel=1e-14)

def test_dfree_dchi_matches_finite_difference():
    rng = np.random.default_rng(9)
    mix = random_mixture(rng, 3)
    rho = rng.uniform(0.2, 2.0, 3)
    for chi in (-0.9, -0.2, 0.4, 0.8):
        h = 1e-6
        fd = (free_energy_density(mix, rho, chi + h)
              - free_energy_density(mix, rho, chi - h)) / (2 * h)
        assert dfree_dchi(mix, rho, chi) == pytest.approx(fd, abs=2e-7)

def test_mu_jacobian_symmetric_and_matches_fd():
    rng = np.random.default_rng(10)
    for n in (2, 3):
        mix = random_mixture(rng, n)
        rho = rng.uniform(0.2, 2.0, n)
        chi = 0.3
        jac = mu_jacobian(mix, rho, chi)
        assert np.abs(jac - jac.T).max() < 1e-14
        h = 1e-6
        for b in range(n):
            dp = rho.copy(); dp[b] += h
            dm = rho.copy(); dm[b] -= h
            fd = (chemical_potentials(mix, dp, chi)
                  - chemical_potentials(mix, dm, chi)) / (2 * h)
            assert np.abs(jac[:, b] - fd).max() < 1e-5

def test_mu_jacobian_positive_definite():
    rng = np.random.default_rng(11)
    for _ in range(50):
        mix = random_mixture(rng, 3)
        rho = rng.uniform(0.1, 2.0, 3)
        jac = mu_jacobian(mix, rho, rng.uniform(-1, 1))
        w = np.linalg.eigvalsh(jac)
        assert w.min() > 0.0

def test_field_shaped_states_broadcast():
    mix = make_mixture()
    rho = np.abs(np.random.default_rng(3).normal(1.0, 0.2, (2, 17)))
    chi = np.linspace(-1, 1, 17)
    mu = chemical_potentials(mix, rho, chi)
    assert mu.shape == (2, 17)
    for j in (0, 8, 16):
        one = chemical_potentials(mix, rho[:, j], chi[j])
        assert np.allclose(mu[:, j], one, rtol=1e-14)
    jac = mu_jacobian(mix, rho, chi)
    assert jac.shape == (17, 2, 2)


# ---------------------------------------------------------- charge

def test_free_charge_density_example():
    mix = make_mixture(charges=np.array([1.0, -1.0]))
    # e0 (z1/m1 rho1 + z2/m2 rho2) = 1*(0.7) - 0.5*(0.4) = 0.5
    rho = np.array([0.7, 0.4])
    assert free_charge_density(mix, rho) == pytest.approx(0.5, abs=1e-15)


# ---------------------------------------------------------- validation

def test_mixture_rejects_bad_inputs():
    with pytest.raises(ValueError):
        make_mixture(masses=np.array([1.0, -2.0]))
    with pytest.raises(ValueError):
        make_mixture(k_liquid=0.0)
    with pytest.raises(ValueError):
        make_mixture(s_liquid=-1.5)
    with pytest.raises(ValueError):
        make_mixture(charges=np.zeros(3))   # length mismatch

def test_nonpositive_density_rejected():
    mix = make_mixture()
    with pytest.raises(ValueError):
        chemical_potentials(mix, np.array([0.5, 0.0]), 0.0)
    with pytest.raises(ValueError):
        free_energy_density(mix, np.array([-0.1, 0.4]), 0.0)
