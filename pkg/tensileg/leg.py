'''
Leg geometry and stiffness model, characterization-rig kinematics, and
actuation sizing.
'''

import numpy as np
import sciris as sc
from . import defaults as tld
from . import base as tlb
from . import parameters as tlpar
from . import springs as tls
from . import rotary as tlr


__all__ = ['LegModel', 'StiffnessSetting', 'joint_names', 'phi_from_h', 'h_from_phi', 'rig_torque',
           'joint_restoring_torque', 'required_actuation_torque', 'winch_reduction', 'servo_feasibility']


joint_names = ['hip', 'knee']


class StiffnessSetting(sc.prettyobj):
    '''
    Position of the stiffness slider: the common pretension displacement of both
    antagonistic sides of every joint.

    Args:
        slider_displacement (float): m, ≥ 0 (0, 20 and 40 mm for the minimum, medium and maximum settings)
    '''

    def __init__(self, slider_displacement=0.0):
        tlb.check_nonnegative(slider_displacement, 'slider_displacement')
        self.slider_displacement = float(slider_displacement)
        return

    @property
    def label(self):
        return tld.setting_label(self.slider_displacement)

    @classmethod
    def make(cls, setting):
        ''' Accept a setting or a displacement in m '''
        if isinstance(setting, cls):
            return setting
        return cls(setting)


class LegModel(tlb.ParsObj):
    '''
    Planar two-joint leg: pelvis, femur and tibia, with a parallel-slack spring
    system pretensioned antagonistically in the hip and the knee. The model is
    immutable once constructed; use copy(**kwargs) for variants.

    Args:
        kwargs (dict): parameters passed to make_leg_pars()

    **Example**::

        model = tl.LegModel(lumped_mass=0.8)
        tl.joint_restoring_torque(model, tl.StiffnessSetting(0.02), 'knee', 0.1)
    '''

    def __init__(self, **kwargs):
        pars = tlpar.make_leg_pars(**kwargs)
        super().__init__(pars)
        self.validate_pars()
        self.networks = sc.objdict({joint: tls.staged_network(self.pars['springs'][joint]['k'], self.pars['springs'][joint]['offsets']) for joint in joint_names})
        self.lock()
        return

    def validate_pars(self):
        ''' Check that the geometry is consistent '''
        p = self.pars
        for key in ['l_pelvis', 'l_femur', 'l_tibia', 'total_extended_length', 'r_drum', 'r_tristar']:
            if not p[key] > 0:
                errormsg = f'Leg parameter "{key}" must be positive, not {p[key]}'
                raise tlb.DomainError(errormsg)
        total = p['l_pelvis'] + p['l_femur'] + p['l_tibia']
        if abs(total - p['total_extended_length']) > 1e-9:
            errormsg = f'Segment lengths add up to {total} m, but total_extended_length is {p["total_extended_length"]} m'
            raise tlb.GeometryError(errormsg)
        if not p['r_drum'] < p['r_tristar']:
            errormsg = f'The drum radius ({p["r_drum"]} m) must be smaller than the tristar radius ({p["r_tristar"]} m)'
            raise tlb.GeometryError(errormsg)
        for key in ['lumped_mass', 'damping_c']:
            tlb.check_nonnegative(p[key], key)
        for joint in joint_names:
            spring = p['springs'][joint]
            tlb.check_nonnegative(spring['k'], f'springs.{joint}.k')
            tlb.check_nonnegative(spring['offsets'], f'springs.{joint}.offsets')
        gamma = self.rest_knee_angle
        if not 0 < gamma < np.pi:
            errormsg = f'The rest flexions give a knee interior angle of {np.rad2deg(gamma):0.2f}°, which must lie strictly between 0° and 180°'
            raise tlb.GeometryError(errormsg)
        return

    # Read-only access to the most used parameters
    l_femur   = property(lambda self: self.pars['l_femur'])
    l_tibia   = property(lambda self: self.pars['l_tibia'])
    l_pelvis  = property(lambda self: self.pars['l_pelvis'])
    r_tristar = property(lambda self: self.pars['r_tristar'])
    r_drum    = property(lambda self: self.pars['r_drum'])
    lumped_mass = property(lambda self: self.pars['lumped_mass'])
    damping_c   = property(lambda self: self.pars['damping_c'])
    total_extended_length = property(lambda self: self.pars['total_extended_length'])

    @property
    def rest_knee_angle(self):
        ''' Knee interior angle of the rest pose, rad (130° by default) '''
        return np.pi - (self.pars['rest_flexion_hip'] - self.pars['rest_flexion_knee'])

    @property
    def rest_height(self):
        ''' Foot-to-hip distance of the rest pose, m '''
        lf, lt = self.l_femur, self.l_tibia
        return np.sqrt(lf**2 + lt**2 - 2*lf*lt*np.cos(self.rest_knee_angle))

    def joint(self, setting, joint):
        ''' The antagonistic joint for one of "hip" or "knee" at a stiffness setting '''
        if joint not in joint_names:
            errormsg = f'Joint "{joint}" not recognized; choices are {joint_names}'
            raise ValueError(errormsg)
        setting = StiffnessSetting.make(setting)
        return tlr.AntagonisticJoint(r_p=self.r_tristar, side_a=self.networks[joint], x0=setting.slider_displacement)


#%% Characterization rig

def phi_from_h(h, l1):
    '''
    Joint angle of the rotation rig from the distance between the arm tips,
    φ = 2·asin(h/(2·l1)), in rad.
    '''
    tlb.check_positive(l1, 'l1')
    h = np.asarray(h, dtype=float)
    tlb.check_finite(h, 'h')
    if np.any(h < 0) or np.any(h > 2*l1):
        errormsg = f'h must lie in [0, {2*l1}] m for an arm length of {l1} m, not {h}'
        raise tlb.DomainError(errormsg)
    phi = 2*np.arcsin(h/(2*l1))
    return phi if phi.ndim else float(phi)


def h_from_phi(phi, l1):
    ''' Distance between the arm tips at joint angle φ, h = 2·l1·sin(φ/2), in m '''
    tlb.check_positive(l1, 'l1')
    phi = np.asarray(phi, dtype=float)
    tlb.check_finite(phi, 'phi')
    if np.any(phi < 0) or np.any(phi > np.pi):
        errormsg = f'phi must lie in [0, π] rad, not {phi}'
        raise tlb.DomainError(errormsg)
    h = 2*l1*np.sin(phi/2)
    return h if h.ndim else float(h)


def rig_torque(F, l1, phi):
    '''
    Torque compensated by the tendon when the rig pulls with force F at joint
    angle φ, M = F·l1·cos(φ/2), in N·m. Evaluated as sin((π − φ)/2) so that it is
    exactly zero at φ = π.
    '''
    phi = np.asarray(phi, dtype=float)
    if np.any(phi < 0) or np.any(phi > np.pi):
        errormsg = f'phi must lie in [0, π] rad, not {phi}'
        raise tlb.DomainError(errormsg)
    M = np.asarray(F, dtype=float)*l1*np.sin((np.pi - phi)/2)
    return M if M.ndim else float(M)


#%% Joint stiffness and actuation

def joint_restoring_torque(model, setting, joint, dtheta):
    '''
    Restoring torque of a joint deflected by dθ from rest,
    τ = r_tristar·[F_net(x0 + r_tristar·dθ) − F_net(x0 − r_tristar·dθ)], in N·m.
    '''
    return tlr.joint_torque(model.joint(setting, joint), dtheta)


def required_actuation_torque(model, payload_mass, safety_factor=1.0):
    '''
    Winch torque needed to hold the payload at the hip with the leg extended,
    τ = ½·m·g·l·safety_factor·(r_drum/r_tristar), in N·m.

    **Example**::

        tl.required_actuation_torque(tl.LegModel(), payload_mass=1, safety_factor=1.957) # ≈ 0.664 N·m
    '''
    tlb.check_nonnegative(payload_mass, 'payload_mass')
    tlb.check_positive(safety_factor, 'safety_factor')
    return 0.5*payload_mass*tld.gravity*model.total_extended_length*safety_factor*winch_reduction(model)


def winch_reduction(model):
    ''' Reduction ratio of the winch, r_drum/r_tristar (1/12 for the prototype) '''
    return model.r_drum/model.r_tristar


def servo_feasibility(required, available=None):
    ''' Compare a required torque with the winch servo's rated torque '''
    available = tld.servo_torque if available is None else available
    return sc.objdict(
        required  = required,
        available = available,
        margin    = available/required if required > 0 else np.inf,
        feasible  = bool(available >= required),
    )
