'''
Test the spring elements and their series/parallel networks.
'''

#%% Imports
import numpy as np
import pytest
import sciris as sc
import tensileg as tl


#%% Define the tests

def test_leaves():
    sc.heading('Leaf force laws')

    spring = tl.Linear(k=500)
    assert tl.spring_force(spring, 0.071) == pytest.approx(35.5, rel=1e-12)
    assert spring.force(-0.01) == 0 # Cables do not push
    assert tl.Linear(500, tension_only=False).force(-0.01) == pytest.approx(-5.0)

    quad = tl.Quadratic(k_l=450, k_q=20000)
    for F in [0.5, 10, 200]:
        x = quad.extension(F)
        assert quad.force(x) == pytest.approx(F, rel=1e-12)
    assert quad.force(-0.01) == 0
    pushing = tl.Quadratic(450, 20000, tension_only=False)
    assert pushing.force(-0.02) == pytest.approx(-pushing.force(0.02))

    offset = tl.SlackOffset(tl.Linear(388.4), 0.012)
    assert offset.force(0.010) == 0
    assert offset.force(0.020) == pytest.approx(388.4*0.008)
    assert offset.slack_length == 0.012

    with pytest.raises(tl.DomainError):
        tl.Linear(-1)
    with pytest.raises(tl.DomainError):
        tl.spring_force(spring, np.nan)

    return spring, quad


def test_staged_network():
    sc.heading('Parallel-slack network')

    net = tl.staged_network()
    assert tl.network_force(net, 0.050) == pytest.approx(388.4*(0.050 + 0.038 + 0.014), rel=1e-12)
    assert tl.slack_length(net) == 0

    # Tangents on the three engagement intervals
    for x,expected in [(0.006, 388.4), (0.024, 776.8), (0.045, 1165.2)]:
        assert tl.network_tangent(net, x) == pytest.approx(expected, rel=1e-3)

    # Energy is the sum of the engaged springs' energies
    x = 0.040
    expected = 0.5*388.4*sum(max(0, x - o)**2 for o in tl.defaults.spring_offsets)
    assert tl.network_energy(net, x) == pytest.approx(expected, rel=1e-12)

    return net


def test_linear_identities():
    sc.heading('Series and parallel identities for random linear networks')

    rng = np.random.default_rng(1)

    def random_network(n_leaves):
        if n_leaves == 1:
            k = rng.uniform(10, 2000)
            return tl.Linear(k), k
        n_left = rng.integers(1, n_leaves)
        left, k_left = random_network(n_left)
        right, k_right = random_network(n_leaves - n_left)
        if rng.random() < 0.5:
            return tl.Parallel(left, right), k_left + k_right
        return tl.Series(left, right), 1/(1/k_left + 1/k_right)

    for i in range(1000):
        net, k_expected = random_network(int(rng.integers(1, 6)))
        k = tl.effective_linear_stiffness(net)
        assert k == pytest.approx(k_expected, rel=1e-12)
        x = rng.uniform(1e-4, 0.1)
        assert net.force(x) == pytest.approx(k*x, rel=1e-12)

    return k


def test_series_numeric():
    sc.heading('Numerical series solve')

    children = [tl.SlackOffset(tl.Linear(300), 0.010), tl.Quadratic(450, 20000)]
    net = tl.Series(children)
    assert net.slack_length == pytest.approx(0.010)
    assert net.force(0.005) == 0
    for x in [0.011, 0.02, 0.05, 0.1]:
        F = net.force(x)
        assert F > 0
        assert sum(child.extension(F) for child in children) == pytest.approx(x, abs=1e-9)

    # Energy by quadrature matches a trapezoidal integral of the force
    xs = np.linspace(0.010, 0.05, 4001)
    forces = np.array([net.force(x) for x in xs])
    trapz = np.sum(0.5*(forces[1:] + forces[:-1])*np.diff(xs))
    assert tl.network_energy(net, 0.05) == pytest.approx(trapz, rel=1e-5)

    # All-linear series agrees with the numerical path through a zero offset
    linear = tl.Series(tl.Linear(500), tl.Linear(500))
    numeric = tl.Series(tl.SlackOffset(tl.Linear(500), 0.0), tl.Linear(500))
    assert numeric.force(0.03) == pytest.approx(linear.force(0.03), rel=1e-9)

    return net


def test_pretension():
    sc.heading('Pretension displacement')

    quad = tl.Quadratic(450, 20000)
    x0 = tl.solve_pretension_displacement(quad, 10)
    assert abs(450*x0 + 20000*x0**2 - 10) <= 1e-12
    assert tl.solve_pretension_displacement(tl.Linear(500), 5) == pytest.approx(0.01)
    assert tl.solve_pretension_displacement(quad, 0) == 0
    assert tl.solve_pretension_displacement(tl.staged_network(), 0) == 0

    net = tl.staged_network()
    x_net = tl.solve_pretension_displacement(net, 20)
    assert net.force(x_net) == pytest.approx(20, abs=1e-8)

    with pytest.raises(tl.DomainError):
        tl.solve_pretension_displacement(quad, -1)
    with pytest.raises(tl.DomainError):
        tl.solve_pretension_displacement(tl.Linear(0), 1)

    return x0


def test_errors():
    sc.heading('Network errors')

    with pytest.raises(ValueError):
        tl.Parallel(tl.Linear(100))
    with pytest.raises(TypeError):
        tl.Series(tl.Linear(100), 100)
    with pytest.raises(tl.UnsupportedConfigurationError):
        tl.effective_linear_stiffness(tl.Parallel(tl.Linear(100), tl.Quadratic(450, 20000)))
    assert tl.Linear(0).degenerate
    assert tl.Series(tl.Linear(0), tl.Linear(100)).force(0.1) == 0

    return


#%% Run as a script
if __name__ == '__main__':

    T = sc.tic()

    spring, quad = test_leaves()
    net          = test_staged_network()
    k            = test_linear_identities()
    series       = test_series_numeric()
    x0           = test_pretension()
    test_errors()

    sc.toc(T)
    print('Done.')
