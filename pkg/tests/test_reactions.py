import numpy as np
import pytest

from elphase.reactions import (ReactionNetwork, affinities, empty_network,
                               mass_production, reaction_entropy_production)

# dissociation A3 <-> A1 + A2 with m = (1, 2, 3), z = (1, -1, 0):
# gamma = (1, 1, -1), sum m gamma = 0, sum z gamma = 0
MASSES = np.array([1.0, 2.0, 3.0])
CHARGES = np.array([1.0, -1.0, 0.0])


def dissociation(rate=0.5):
    return ReactionNetwork(
        forward=np.array([[0, 0, 1]]),
        backward=np.array([[1, 1, 0]]),
        rates=np.array([rate]),
        masses=MASSES, charges=CHARGES)


def test_gamma_and_validation():
    net = dissociation()
    assert np.array_equal(net.gamma, [[1, 1, -1]])
    assert net.n_reactions == 1

def test_unbalanced_mass_rejected():
    with pytest.raises(ValueError):
        ReactionNetwork(forward=np.array([[0, 0, 1]]),
                        backward=np.array([[1, 0, 0]]),   # loses 2 mass units
                        rates=np.array([1.0]),
                        masses=MASSES, charges=CHARGES)

def test_unbalanced_charge_rejected():
    with pytest.raises(ValueError):
        ReactionNetwork(forward=np.array([[0, 1, 0]]),
                        backward=np.array([[2, 0, 0]]),   # mass ok, charge not
                        rates=np.array([1.0]),
                        masses=np.array([2.0, 4.0, 3.0]),
                        charges=CHARGES)

def test_negative_rate_or_coefficient_rejected():
    with pytest.raises(ValueError):
        dissociation(rate=-1.0)
    with pytest.raises(ValueError):
        ReactionNetwork(forward=np.array([[0, 0, -1]]),
                        backward=np.array([[-1, -1, 0]]),
                        rates=np.array([1.0]),
                        masses=MASSES, charges=CHARGES)


def test_affinity_hand_value():
    net = dissociation()
    mu = np.array([0.2, -0.1, 0.3])
    # A = m1 g1 mu1 + m2 g2 mu2 + m3 g3 mu3 = 0.2 - 0.2 - 0.9
    a = affinities(net, mu)
    assert a.shape == (1,)
    assert a[0] == pytest.approx(-0.9, abs=1e-15)

def test_mass_production_sign_and_scale():
    net = dissociation(rate=0.5)
    mu = np.array([0.2, -0.1, 0.3])
    r = mass_production(net, mu)
    factor = 0.5 * (1.0 - np.exp(-0.9))
    expect = MASSES * np.array([1.0, 1.0, -1.0]) * factor
    assert np.allclose(r, expect, rtol=1e-14)

def test_mass_production_conservation_random():
    rng = np.random.default_rng(4)
    net = dissociation(rate=1.3)
    zm = CHARGES / MASSES
    for _ in range(200):
        mu = rng.normal(0.0, 2.0, 3)
        r = mass_production(net, mu)
        assert abs(r.sum()) < 1e-12
        assert abs(zm @ r) < 1e-12

def test_equilibrium_produces_nothing():
    net = dissociation()
    # any mu with zero affinity: mu1 + 2 mu2 = 3 mu3
    mu = np.array([1.0, 1.0, 1.0])
    assert np.all(mass_production(net, mu) == 0.0)
    assert reaction_entropy_production(net, mu) == 0.0

def test_entropy_production_nonnegative():
    rng = np.random.default_rng(5)
    net = dissociation(rate=0.7)
    for _ in range(500):
        mu = rng.normal(0.0, 3.0, 3)
        assert reaction_entropy_production(net, mu) >= 0.0

def test_affinity_overflow_guard():
    net = dissociation()
    mu = np.array([300.0, 300.0, -300.0])   # A around +1800, exp(A) explodes
    with pytest.raises(FloatingPointError):
        mass_production(net, mu)
    # the other direction underflows harmlessly to the forward-rate plateau
    r = mass_production(net, -mu)
    assert np.all(np.isfinite(r))

def test_empty_network():
    net = empty_network(MASSES, CHARGES)
    assert net.n_reactions == 0
    r = mass_production(net, np.zeros(3))
    assert r.shape == (3,) and np.all(r == 0.0)
    assert reaction_entropy_production(net, np.zeros(3)) == 0.0

def test_field_shaped_mu():
    net = dissociation()
    mu = np.zeros((3, 11))
    mu[0] = np.linspace(-1, 1, 11)
    r = mass_production(net, mu)
    assert r.shape == (3, 11)
    col = mass_production(net, mu[:, 3])
    assert np.allclose(r[:, 3], col, rtol=1e-14)
