'''
Test the antagonistic joint torque and rotational stiffness.
'''

#%% Imports
import numpy as np
import pytest
import sciris as sc
import tensileg as tl

r_p = 0.05


#%% Define the tests

def test_linear_stiffness():
    sc.heading('Linear rotational stiffness')

    assert tl.rotational_stiffness_linear(500, 100, r_p) == pytest.approx(1.5)
    assert tl.rotational_stiffness_series(500, 500, 100, r_p) == pytest.approx(0.875)
    assert tl.rotational_stiffness_parallel(500, 600, 100, r_p) == pytest.approx(3.0)

    # Both sides taut: the antagonistic tangent is twice the single-side value
    element = tl.Parallel(tl.Linear(500), tl.Linear(100))
    joint = tl.AntagonisticJoint(r_p=r_p, side_a=element, x0=0.02)
    expected = 2*tl.rotational_stiffness_linear(500, 100, r_p)
    for theta in [-0.2, 0, 0.1, 0.3]:
        assert tl.tangent_stiffness(joint, theta) == pytest.approx(expected, rel=1e-9)

    # Invariance to pretension
    values = []
    for F0 in np.linspace(1, 20, 10):
        joint = tl.AntagonisticJoint(r_p=r_p, side_a=element, F0=F0)
        values.append(tl.tangent_stiffness(joint, 0.0))
    assert np.allclose(values, expected, rtol=1e-9, atol=0)

    return values


def test_quadratic_stiffness():
    sc.heading('Quadratic rotational stiffness')

    k_l, k_q, F0 = 450, 20000, 10
    x0 = tl.solve_pretension_displacement(tl.Quadratic(k_l, k_q), F0)
    assert abs(k_l*x0 + k_q*x0**2 - F0) <= 1e-12

    # Closed form against numerical differentiation of the single-side torque
    h = 1e-6
    thetas = np.linspace(-0.4, 0.4, 101)
    for theta in thetas:
        numeric = (tl.single_side_torque_quadratic(k_l, k_q, x0, r_p, theta+h) - tl.single_side_torque_quadratic(k_l, k_q, x0, r_p, theta-h))/(2*h)
        closed = tl.rotational_stiffness_quadratic(k_l, k_q, x0, r_p, theta)
        assert numeric == pytest.approx(closed, rel=1e-6)

    # Stiffness grows with pretension
    stiffnesses = [tl.rotational_stiffness_quadratic(k_l, k_q, tl.solve_pretension_displacement(tl.Quadratic(k_l, k_q), F), r_p, 0) for F in [0, 10, 20]]
    assert np.all(np.diff(stiffnesses) > 0)

    # The antagonistic tangent at rest is twice the single side
    joint = tl.AntagonisticJoint(r_p=r_p, side_a=tl.Quadratic(k_l, k_q), F0=F0)
    assert tl.tangent_stiffness(joint, 0) == pytest.approx(2*tl.rotational_stiffness_quadratic(k_l, k_q, x0, r_p, 0), rel=1e-6)

    # The antagonistic tangent at rest grows with pretension at 4·k_q·r_p² per metre
    x0s = np.linspace(0.01, 0.1, 10)
    tangents = np.array([tl.tangent_stiffness(tl.AntagonisticJoint(r_p=r_p, side_a=tl.Quadratic(k_l, k_q), x0=x), 0) for x in x0s])
    assert np.all(np.diff(tangents) > 0)
    assert np.allclose(np.diff(tangents)/np.diff(x0s), 4*k_q*r_p**2, rtol=1e-6, atol=0)

    return stiffnesses


def test_torque():
    sc.heading('Joint torque')

    joint = tl.AntagonisticJoint(r_p=r_p, side_a=tl.staged_network(), x0=0.02)
    assert tl.joint_torque(joint, 0) == 0
    for theta in [0.05, 0.2, 0.5]:
        assert tl.joint_torque(joint, theta) == pytest.approx(-tl.joint_torque(joint, -theta), rel=1e-12)
        assert tl.joint_torque(joint, theta) > 0
    assert tl.single_side_torque(joint, 0) == pytest.approx(r_p*joint.side_a.force(0.02))

    with pytest.raises(ValueError):
        tl.AntagonisticJoint(r_p=r_p, side_a=tl.Linear(100), x0=0.01, F0=1)
    with pytest.raises(tl.DomainError):
        tl.AntagonisticJoint(r_p=0, side_a=tl.Linear(100))

    return joint


def test_slack_transition():
    sc.heading('Slack transition in the stencil')

    joint = tl.AntagonisticJoint(r_p=r_p, side_a=tl.Linear(500), x0=0.0)
    out = tl.tangent_stiffness(joint, 0.0, full_output=True)
    assert out.slack_transition
    assert out.stiffness == pytest.approx(500*r_p**2, rel=1e-9)

    taut = tl.AntagonisticJoint(r_p=r_p, side_a=tl.Linear(500), x0=0.01)
    assert not tl.tangent_stiffness(taut, 0.0, full_output=True).slack_transition

    return out


def test_sweeps():
    sc.heading('Stiffness sweeps')

    thetas = np.linspace(-1, 1, 21)
    df = tl.pretension_sweep(tl.Quadratic(450, 20000), r_p, [0, 10, 20], thetas)
    assert list(df.columns) == ['theta_rad', 'k_theta_F0_0N', 'k_theta_F0_10N', 'k_theta_F0_20N']
    assert len(df) == len(thetas)
    mid = len(thetas)//2
    assert df['k_theta_F0_20N'][mid] > df['k_theta_F0_10N'][mid] > df['k_theta_F0_0N'][mid]

    joint = tl.AntagonisticJoint(r_p=r_p, side_a=tl.Linear(500), x0=0.02)
    sweep = tl.stiffness_sweep(joint, [0, 0.1])
    assert sweep.shape == (2,)

    return df


#%% Run as a script
if __name__ == '__main__':

    T = sc.tic()

    values     = test_linear_stiffness()
    stiffnesses = test_quadratic_stiffness()
    joint      = test_torque()
    out        = test_slack_transition()
    df         = test_sweeps()

    sc.toc(T)
    print('Done.')
