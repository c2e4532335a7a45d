'''
Lead-screw dimensioning for the pretension slider: lead angle, raise and lower
torque, self-locking verdict and motor feasibility.

Torques come in two formula modes. "standard" evaluates the power-screw
expressions as printed; "paper-compat" evaluates one half of them, which is what
the prototype's reported dimensioning numbers correspond to. Both are always
available and labeled.
'''

import numpy as np
import sciris as sc
from . import defaults as tld
from . import base as tlb


__all__ = ['LeadScrewSpec', 'formula_modes', 'axial_force_from_springs', 'lead_angle', 'torque_raise',
           'torque_lower', 'torque_lower_signed', 'self_locking', 'motor_feasibility', 'leadscrew_report']


formula_modes = ['standard', 'paper-compat']
mode_factors  = {'standard': 1.0, 'paper-compat': 0.5}


class LeadScrewSpec(sc.prettyobj):
    '''
    Geometry, friction and load of a lead screw.

    Args:
        D_m (float): mean diameter, m
        L (float): lead, m per revolution
        mu (float): friction coefficient, 0 ≤ mu < 1
        F_axial (float): axial force, N
        motor_torque_available (float): torque of the driving motor, N·m (optional)

    **Example**::

        spec = tl.LeadScrewSpec(D_m=0.008, L=0.004, mu=0.15, F_axial=320, motor_torque_available=0.45)
        tl.torque_raise(spec, mode='paper-compat') # ≈ 0.2027 N·m
    '''

    def __init__(self, D_m, L, mu, F_axial, motor_torque_available=None):
        tlb.check_positive(D_m, 'D_m')
        tlb.check_positive(L, 'L')
        tlb.check_nonnegative(mu, 'mu')
        if mu >= 1:
            errormsg = f'Friction coefficient must be below 1, not {mu}'
            raise tlb.DomainError(errormsg)
        tlb.check_nonnegative(F_axial, 'F_axial')
        if motor_torque_available is not None:
            tlb.check_nonnegative(motor_torque_available, 'motor_torque_available')
        self.D_m = float(D_m)
        self.L   = float(L)
        self.mu  = float(mu)
        self.F_axial = float(F_axial)
        self.motor_torque_available = motor_torque_available
        return


def _mode_factor(mode):
    try:
        return mode_factors[mode]
    except KeyError:
        errormsg = f'Formula mode "{mode}" not recognized; choices are {formula_modes}'
        raise ValueError(errormsg)


def axial_force_from_springs(per_spring_force, n_springs=4):
    ''' Axial load on the slider nut: the pull of all springs it pretensions, in N '''
    tlb.check_nonnegative(per_spring_force, 'per_spring_force')
    if n_springs < 1:
        errormsg = f'At least one spring must load the screw, not {n_springs}'
        raise tlb.DomainError(errormsg)
    return n_springs*per_spring_force


def lead_angle(spec):
    ''' Helix angle of the thread, λ = atan(L/(π·D_m)), in rad '''
    return np.arctan(spec.L/(np.pi*spec.D_m))


def torque_raise(spec, mode='standard'):
    '''
    Torque to move the nut against the load,
    T = (F·D_m/2)·(L + π·μ·D_m)/(π·D_m − μ·L), times 1/2 in paper-compat mode.
    '''
    factor = _mode_factor(mode)
    denominator = np.pi*spec.D_m - spec.mu*spec.L
    if denominator <= 0:
        errormsg = f'Raise torque undefined: π·D_m − μ·L = {denominator:0.3e} m is not positive (overhauling geometry)'
        raise tlb.GeometryError(errormsg)
    return factor*(spec.F_axial*spec.D_m/2)*(spec.L + np.pi*spec.mu*spec.D_m)/denominator


def torque_lower(spec, mode='standard'):
    '''
    Torque to lower the load as printed,
    T = (F·D_m/2)·(L − π·μ·D_m)/(π·D_m + μ·L), times 1/2 in paper-compat mode.
    The sign is reported as-is; see self_locking() for the regime.
    '''
    factor = _mode_factor(mode)
    return factor*(spec.F_axial*spec.D_m/2)*(spec.L - np.pi*spec.mu*spec.D_m)/(np.pi*spec.D_m + spec.mu*spec.L)


def torque_lower_signed(spec, mode='standard'):
    '''
    Lowering torque with the conventional sign, numerator π·μ·D_m − L: positive
    when the screw holds the load and has to be driven down, negative when the
    load back-drives it.
    '''
    return -torque_lower(spec, mode=mode)


def self_locking(spec):
    '''
    Self-locking verdict, μ > tan(λ) (strict). Both operands are returned so
    marginal cases can be reported.

    Returns:
        verdict (objdict): self_locking, mu, tan_lambda and regime ("holds-load" or "back-drives")
    '''
    tan_lambda = np.tan(lead_angle(spec))
    locking = bool(spec.mu > tan_lambda)
    verdict = sc.objdict(
        self_locking = locking,
        mu           = spec.mu,
        tan_lambda   = tan_lambda,
        regime       = 'holds-load' if locking else 'back-drives',
    )
    return verdict


def motor_feasibility(spec, mode='standard'):
    '''
    Check whether the motor can raise the load.

    Returns:
        report (objdict): required and available torque in N·m, margin (available/required) and feasible
    '''
    available = spec.motor_torque_available
    if available is None:
        errormsg = 'Motor feasibility needs the available motor torque (leadscrew.motor_torque_available)'
        raise tlb.ConfigError(errormsg)
    required = torque_raise(spec, mode=mode)
    margin = available/required if required > 0 else np.inf
    report = sc.objdict(
        required  = required,
        available = available,
        margin    = margin,
        feasible  = bool(available >= required),
    )
    return report


def leadscrew_report(spec, modes=None):
    '''
    Full dimensioning report for one screw, in every requested formula mode.

    Returns:
        report (objdict): lead angle, self-locking verdict with the contradiction note, and per-mode torques
    '''
    modes = formula_modes if modes is None else sc.tolist(modes)
    verdict = self_locking(spec)
    report = sc.objdict()
    report.inputs = sc.objdict(D_m=spec.D_m, L=spec.L, mu=spec.mu, F_axial=spec.F_axial, motor_torque_available=spec.motor_torque_available)
    report.lead_angle_rad = lead_angle(spec)
    report.lead_angle_deg = np.rad2deg(report.lead_angle_rad)
    report.self_locking = verdict
    report.note = tld.self_locking_note
    report.modes = sc.objdict()
    for mode in modes:
        lower = torque_lower(spec, mode=mode)
        entry = sc.objdict(
            torque_raise           = torque_raise(spec, mode=mode),
            torque_lower           = lower,
            torque_lower_magnitude = abs(lower),
            lowering_regime        = verdict.regime,
        )
        if spec.motor_torque_available is not None:
            entry.motor = motor_feasibility(spec, mode=mode)
        report.modes[mode] = entry
    return report
