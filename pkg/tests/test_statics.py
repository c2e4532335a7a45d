'''
Test the quasi-static compression of the leg.
'''

#%% Imports
import numpy as np
import pytest
import sciris as sc
import tensileg as tl


#%% Define the tests

def test_pose():
    sc.heading('Leg pose')

    model = tl.LegModel()
    pose = tl.leg_pose(model, 0)
    assert pose.H == pytest.approx(model.rest_height)
    assert pose.gamma == pytest.approx(model.rest_knee_angle)

    # Analytic rates against finite differences
    h = 1e-7
    y = 0.05
    up, down = tl.leg_pose(model, y+h), tl.leg_pose(model, y-h)
    pose = tl.leg_pose(model, y)
    assert pose.dgamma_dy == pytest.approx((up.gamma - down.gamma)/(2*h), rel=1e-6)
    assert pose.dalpha_dy == pytest.approx((up.alpha - down.alpha)/(2*h), rel=1e-6)

    d = tl.joint_deflections(model, y)
    assert d.hip > 0 and d.knee > 0 # Both joints flex under compression

    with pytest.raises(tl.GeometryError):
        tl.leg_pose(model, model.rest_height)
    with pytest.raises(tl.GeometryError):
        tl.leg_pose(model, -0.1)

    return pose


def test_virtual_work():
    sc.heading('Virtual work against the energy gradient')

    model = tl.LegModel()
    h = 1e-6
    for setting in tl.default_settings:
        for y in np.arange(1, 21)*0.005:
            force = tl.vertical_force(model, setting, y)
            gradient = (tl.elastic_energy(model, setting, y+h) - tl.elastic_energy(model, setting, y-h))/(2*h)
            assert force == pytest.approx(gradient, rel=1e-4)

    return force


def test_settings():
    sc.heading('Compression force across settings')

    model = tl.LegModel()
    forces = []
    for setting in tl.default_settings:
        scenario = tl.CompressionScenario(model=model, setting=setting)
        forces.append(tl.reaction_force(scenario, 0.10))
    assert np.all(np.diff(forces) > 0)
    assert forces[-1]/forces[0] >= 1.5
    assert tl.force_difference_pct(21.97, 11.71) == pytest.approx(87.61, abs=0.01)

    scenario = tl.CompressionScenario(model=model, setting=0.02)
    assert tl.reaction_force(scenario, 0) == 0
    with pytest.raises(tl.DomainError):
        tl.reaction_force(scenario, 0.11)
    with pytest.raises(tl.DomainError):
        tl.CompressionScenario(step=0)
    with pytest.raises(tl.DomainError):
        tl.force_difference_pct(1, 0)

    return forces


def test_setting_monotone():
    sc.heading('Force is monotone in the setting at every compression')

    model = tl.LegModel()
    settings = [float(s) for s in np.linspace(0, 0.04, 9)]
    sweeps = tl.multi_compress(model, settings, step=0.005)
    forces = np.array([df['force_N'].values for df in sweeps.values()])
    assert forces.shape == (9, 21)
    assert np.all(np.diff(forces, axis=0) >= -1e-12)

    return forces


def test_sweep():
    sc.heading('Compression sweep')

    scenario = tl.CompressionScenario(setting=0.04)
    df = tl.compression_sweep(scenario)
    assert list(df.columns) == ['compression_m', 'force_N']
    assert len(df) == 201
    assert df['compression_m'].iloc[-1] == pytest.approx(0.10)
    assert np.all(np.diff(df['compression_m']) > 0)
    assert np.all(np.diff(df['force_N']) > 0)

    again = tl.compression_sweep(tl.CompressionScenario(setting=0.04))
    assert df.equals(again)

    return df


#%% Run as a script
if __name__ == '__main__':

    T = sc.tic()

    pose   = test_pose()
    force  = test_virtual_work()
    forces = test_settings()
    grid   = test_setting_monotone()
    df     = test_sweep()

    sc.toc(T)
    print('Done.')
