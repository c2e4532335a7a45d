'''
Quasi-static compression of the planar two-joint leg: the foot is pinned at the
origin and the hip slides on the vertical line through the foot, so a single
coordinate (the vertical compression y) sets both joint angles.
'''

import numpy as np
import pandas as pd
import sciris as sc
from . import defaults as tld
from . import base as tlb
from . import leg as tlleg


__all__ = ['CompressionScenario', 'leg_height', 'leg_pose', 'joint_deflections', 'vertical_force',
           'elastic_energy', 'reaction_force', 'compression_sweep', 'force_difference_pct']


class CompressionScenario(tlb.ParsObj):
    '''
    A quasi-static compression of the leg at one stiffness setting.

    Args:
        model (LegModel): the leg
        setting (StiffnessSetting or float): slider displacement
        max_compression (float): end of the sweep, m
        step (float): grid step, m (0.5 mm by default)
    '''

    def __init__(self, model=None, setting=0.0, max_compression=0.10, step=5e-4):
        model = tlleg.LegModel() if model is None else model
        pars = dict(model=model, setting=tlleg.StiffnessSetting.make(setting), max_compression=max_compression, step=step)
        super().__init__(pars)
        if not (0 < step <= max_compression):
            errormsg = f'Need 0 < step ≤ max_compression, not step={step} and max_compression={max_compression}'
            raise tlb.DomainError(errormsg)
        self.lock()
        return

    model   = property(lambda self: self.pars['model'])
    setting = property(lambda self: self.pars['setting'])

    @property
    def grid(self):
        ''' Compression values from 0 to max_compression at the configured step '''
        n = int(np.floor(self['max_compression']/self['step'] + 1e-9)) + 1
        return np.arange(n)*self['step']


def leg_height(model, knee_interior_angle):
    ''' Foot-to-hip distance for a knee interior angle, by the law of cosines '''
    if not 0 < knee_interior_angle <= np.pi:
        errormsg = f'The knee interior angle must lie in (0, π], not {knee_interior_angle}'
        raise tlb.DomainError(errormsg)
    lf, lt = model.l_femur, model.l_tibia
    return np.sqrt(lf**2 + lt**2 - 2*lf*lt*np.cos(knee_interior_angle))


def leg_pose(model, compression):
    '''
    Joint angles and their rates at a vertical compression y from the rest pose.

    Returns:
        pose (objdict): height H, knee interior angle gamma, hip angle alpha (femur
        to vertical), and the analytic partials dgamma_dy and dalpha_dy
    '''
    tlb.check_finite(compression, 'compression')
    lf, lt = model.l_femur, model.l_tibia
    H = model.rest_height - compression
    if not (abs(lf - lt) < H < lf + lt):
        errormsg = f'Compression {compression:0.6f} m gives a hip height of {H:0.6f} m, outside the kinematic range ({abs(lf-lt):0.6f}, {lf+lt:0.6f}) m'
        raise tlb.GeometryError(errormsg)
    gamma = np.arccos((lf**2 + lt**2 - H**2)/(2*lf*lt))
    alpha = np.arccos((lf**2 + H**2 - lt**2)/(2*lf*H))
    pose = sc.objdict()
    pose.H = H
    pose.gamma = gamma
    pose.alpha = alpha
    pose.dgamma_dy = -H/(lf*lt*np.sin(gamma)) # dH/dy = −1
    pose.dalpha_dy = (H**2 - lf**2 + lt**2)/(2*lf*H**2*np.sin(alpha))
    return pose


def _rest_alpha(model):
    lf, lt, H = model.l_femur, model.l_tibia, model.rest_height
    return np.arccos((lf**2 + H**2 - lt**2)/(2*lf*H))


def joint_deflections(model, compression):
    '''
    Flexion of each joint away from its rest angle, rad, with their rates per
    unit compression.

    Returns:
        deflections (objdict): hip and knee deflections, and hip_rate and knee_rate in rad/m
    '''
    pose = leg_pose(model, compression)
    out = sc.objdict()
    out.hip  = pose.alpha - _rest_alpha(model)
    out.knee = model.rest_knee_angle - pose.gamma
    out.hip_rate  = pose.dalpha_dy
    out.knee_rate = -pose.dgamma_dy
    return out


def vertical_force(model, setting, compression):
    '''
    Vertical force the leg exerts at compression y, by virtual work:
    F_v = Σ_j τ_j(Δθ_j)·dΔθ_j/dy. Valid for negative compression (extension) as
    long as the pose is feasible.
    '''
    d = joint_deflections(model, compression)
    tau_hip  = tlleg.joint_restoring_torque(model, setting, 'hip', d.hip)
    tau_knee = tlleg.joint_restoring_torque(model, setting, 'knee', d.knee)
    return tau_hip*d.hip_rate + tau_knee*d.knee_rate


def elastic_energy(model, setting, compression):
    '''
    Elastic energy stored in both joints relative to the rest pose, J. For each
    joint, E(x0 + r·Δ) + E(x0 − r·Δ) − 2·E(x0) summed over the spring network.
    '''
    setting = tlleg.StiffnessSetting.make(setting)
    d = joint_deflections(model, compression)
    x0 = setting.slider_displacement
    r = model.r_tristar
    energy = 0.0
    for joint in tlleg.joint_names:
        net = model.networks[joint]
        delta = d[joint]
        energy += net.energy(x0 + r*delta) + net.energy(x0 - r*delta) - 2*net.energy(x0)
    return energy


def reaction_force(scenario, compression):
    '''
    Reaction force at the crosshead for a compression within the scenario's range, N.

    **Example**::

        scen = tl.CompressionScenario(setting=0.04)
        tl.reaction_force(scen, 0.1)
    '''
    tlb.check_finite(compression, 'compression')
    if not (0 <= compression <= scenario['max_compression']):
        errormsg = f'Compression must lie in [0, {scenario["max_compression"]}] m, not {compression}'
        raise tlb.DomainError(errormsg)
    if compression == 0:
        return 0.0
    return vertical_force(scenario.model, scenario.setting, compression)


def compression_sweep(scenario, verbose=0):
    '''
    Reaction force over the scenario's compression grid.

    Returns:
        df (dataframe): columns compression_m and force_N, one row per grid point
    '''
    grid = scenario.grid
    sc.printv(f'Compression sweep at {scenario.setting.label}: {len(grid)} points up to {scenario["max_compression"]} m', 1, verbose)
    forces = np.array([reaction_force(scenario, y) for y in grid], dtype=tld.result_float)
    return pd.DataFrame({'compression_m': grid, 'force_N': forces})


def force_difference_pct(force_high, force_low):
    ''' Relative increase of the higher setting's force over the lower one, in % '''
    if force_low == 0:
        errormsg = 'The lower force is zero, so the relative difference is undefined'
        raise tlb.DomainError(errormsg)
    return (force_high - force_low)/force_low*100
