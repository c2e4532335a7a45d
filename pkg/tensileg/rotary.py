'''
Torque and rotational stiffness of the antagonistic pulley joint.

Two kinds of stiffness are exposed and named apart:

* the single-side expressions, for one spring path wound on the pulley, e.g.
  k_θ = (k_s + k_c)·r_p²;
* the antagonistic tangent of the two-sided joint torque, which is twice the
  single-side value when both sides are taut.
'''

import numpy as np
import pandas as pd
import sciris as sc
from . import defaults as tld
from . import base as tlb
from . import springs as tls


__all__ = ['AntagonisticJoint', 'joint_torque', 'single_side_torque', 'single_side_torque_quadratic',
           'rotational_stiffness_linear', 'rotational_stiffness_series', 'rotational_stiffness_parallel',
           'rotational_stiffness_quadratic', 'tangent_stiffness', 'stiffness_sweep', 'pretension_sweep']


class AntagonisticJoint(sc.prettyobj):
    '''
    A pulley of radius r_p with a spring network pulling on each side. Both sides
    are stretched by the same pretension displacement x0; rotating by θ adds r_p·θ
    to side A and removes it from side B.

    Args:
        r_p (float): pulley radius, m
        side_a (SpringNetwork): network on side A
        side_b (SpringNetwork): network on side B (default: same as side A)
        x0 (float): pretension displacement, m
        F0 (float): pretension force, N; if given instead of x0, converted with solve_pretension_displacement() on side A

    **Example**::

        joint = tl.AntagonisticJoint(r_p=0.05, side_a=tl.Quadratic(450, 20000), F0=10)
        tl.tangent_stiffness(joint, 0) # ≈ 5.005 N·m/rad
    '''

    def __init__(self, r_p, side_a, side_b=None, x0=None, F0=None):
        tlb.check_positive(r_p, 'r_p')
        if side_b is None:
            side_b = side_a
        if x0 is not None and F0 is not None:
            errormsg = f'Specify either the pretension displacement (x0={x0}) or the pretension force (F0={F0}), not both'
            raise ValueError(errormsg)
        if F0 is not None:
            x0 = tls.solve_pretension_displacement(side_a, F0)
        elif x0 is None:
            x0 = 0.0
        tlb.check_nonnegative(x0, 'x0')
        self.r_p    = float(r_p)
        self.side_a = side_a
        self.side_b = side_b
        self.x0     = float(x0)
        self.F0     = F0
        return

    def extensions(self, theta):
        ''' Extension of side A and side B at rotation theta '''
        dx = self.r_p*theta
        return self.x0 + dx, self.x0 - dx


def joint_torque(j, theta):
    '''
    Net torque on the pulley, T = r_p·[F_a(x0 + r_p·θ) − F_b(x0 − r_p·θ)], in N·m.
    For identical sides it is odd in θ and zero at θ = 0.
    '''
    tlb.check_finite(theta, 'theta')
    x_a, x_b = j.extensions(theta)
    return j.r_p*(j.side_a.force(x_a) - j.side_b.force(x_b))


def single_side_torque(j, theta):
    ''' Torque of side A alone, r_p·F_a(x0 + r_p·θ) '''
    tlb.check_finite(theta, 'theta')
    return j.r_p*j.side_a.force(j.x0 + j.r_p*theta)


def single_side_torque_quadratic(k_l, k_q, x0, r_p, theta):
    '''
    Expanded single-side torque of a taut quadratic spring,
    T = r_p·[k_l·(x0 + r_p·θ) + k_q·(x0 + r_p·θ)²], with no slack clamping.
    '''
    x = x0 + r_p*theta
    return r_p*(k_l*x + k_q*x**2)


def rotational_stiffness_linear(k_s, k_c, r_p):
    '''
    Single-side rotational stiffness of a linear spring in line with a cable,
    k_θ = (k_s + k_c)·r_p².

    **Example**::

        tl.rotational_stiffness_linear(500, 100, 0.05) # 1.5 N·m/rad
    '''
    tlb.check_nonnegative(k_s, 'k_s')
    tlb.check_nonnegative(k_c, 'k_c')
    tlb.check_positive(r_p, 'r_p')
    return (k_s + k_c)*r_p**2


def rotational_stiffness_series(k_s1, k_s2, k_c, r_p):
    ''' As rotational_stiffness_linear(), with two springs in series on the path '''
    tlb.check_nonnegative([k_s1, k_s2], 'spring stiffness')
    k_s = 0.0 if (k_s1 == 0 or k_s2 == 0) else k_s1*k_s2/(k_s1 + k_s2)
    return rotational_stiffness_linear(k_s, k_c, r_p)


def rotational_stiffness_parallel(k_s1, k_s2, k_c, r_p):
    ''' As rotational_stiffness_linear(), with two springs in parallel on the path '''
    tlb.check_nonnegative([k_s1, k_s2], 'spring stiffness')
    return rotational_stiffness_linear(k_s1 + k_s2, k_c, r_p)


def rotational_stiffness_quadratic(k_l, k_q, x0, r_p, theta):
    '''
    Single-side rotational stiffness of a taut pretensioned quadratic spring,
    k_θ = (k_l + 2·k_q·x0)·r_p² + 2·k_q·r_p³·θ. The stiffness grows as the pulley
    turns towards the spring and with the pretension.
    '''
    tlb.check_finite([k_l, k_q, x0, r_p, theta], 'stiffness arguments')
    return (k_l + 2*k_q*x0)*r_p**2 + 2*k_q*r_p**3*theta


def _side_slope(net, x, delta):
    '''
    Central-difference slope dF/dx of one side, divided by the step actually
    realized after rounding. None if the one-sided differences disagree.
    '''
    x_plus, x_minus = x + delta, x - delta
    F0, F_plus, F_minus = net.force(x), net.force(x_plus), net.force(x_minus)
    forward  = (F_plus - F0)/(x_plus - x)
    backward = (F0 - F_minus)/(x - x_minus)
    scale = max(abs(forward), abs(backward))
    if abs(forward - backward) <= tld.kink_rtol*scale + 1e-9:
        return (F_plus - F_minus)/(x_plus - x_minus)
    return None


def _one_sided_slope(net, x, delta, direction):
    ''' Second-order one-sided slope, looking forward (+1) or backward (-1) in x '''
    F0, F1, F2 = net.force(x), net.force(x + direction*delta), net.force(x + 2*direction*delta)
    return direction*(-3*F0 + 4*F1 - F2)/(2*delta)


def tangent_stiffness(j, theta, h=None, full_output=False):
    '''
    Antagonistic rotational stiffness dT/dθ of the joint, by central difference.

    Each side is differenced at its own extension, dT/dθ = r_p²·[F_a'(x_a) + F_b'(x_b)].
    The step is halved while the forward and backward differences of a side
    disagree, which means a slack transition lies within the stencil. If the
    mismatch persists, that side uses the one-sided derivative in the direction
    of increasing θ and the result is flagged as a slack transition.

    Args:
        j (AntagonisticJoint): the joint
        theta (float): rotation, rad
        h (float): initial step, rad (default 1e-6)
        full_output (bool): if True, return an objdict with the stiffness and the flag

    Returns:
        stiffness in N·m/rad, or an objdict if full_output
    '''
    tlb.check_finite(theta, 'theta')
    h = tld.fd_step if h is None else h
    delta0 = j.r_p*h
    transition = False
    slopes = []
    for net, x, direction in zip([j.side_a, j.side_b], j.extensions(theta), [1, -1]): # Side B shortens as θ grows
        slope = None
        delta = delta0
        for halving in range(10):
            slope = _side_slope(net, x, delta)
            if slope is not None:
                break
            delta /= 2
        if slope is None:
            transition = True
            slope = _one_sided_slope(net, x, delta0, direction)
        slopes.append(slope)

    stiffness = j.r_p**2*sum(slopes)
    if full_output:
        return sc.objdict(stiffness=stiffness, slack_transition=transition)
    return stiffness


def stiffness_sweep(j, thetas, h=None):
    ''' Tangent stiffness over an array of rotations '''
    return np.array([tangent_stiffness(j, theta, h=h) for theta in sc.toarray(thetas)], dtype=tld.result_float)


def pretension_sweep(element, r_p, F0s, thetas):
    '''
    Tangent stiffness of an antagonistic joint built from two identical elements,
    swept over rotation for several pretension forces.

    Returns:
        df (dataframe): a theta_rad column, then one k_theta column per pretension
    '''
    thetas = sc.toarray(thetas)
    data = {'theta_rad': thetas}
    for F0 in sc.tolist(F0s):
        joint = AntagonisticJoint(r_p=r_p, side_a=element, F0=F0)
        data[f'k_theta_F0_{F0:g}N'] = stiffness_sweep(joint, thetas)
    return pd.DataFrame(data)
