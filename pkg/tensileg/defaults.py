'''
Set the defaults across each of the different files.
'''

import numpy as np
import sciris as sc

# Specify all externally visible things this file defines
__all__ = ['gravity', 'default_settings', 'get_colors', 'get_setting_colors', 'setting_label']


#%% Physical constants and numerical tolerances

gravity      = 9.80665 # Standard gravity, m/s²
result_float = np.float64 # Always use float64 for results

root_xtol  = 1e-12 # Absolute tolerance on roots (forces in N, extensions in m)
event_xtol = 1e-12 # Absolute tolerance on the contact time, s
max_bracket_doublings = 200 # Give up bracketing a series force after this many doublings
fd_step    = 1e-6  # Central-difference step for tangents (m or rad)
kink_rtol  = 1e-4  # Relative mismatch of one-sided differences that signals a slack transition


#%% Prototype values

# Parallel-slack spring system in each joint
spring_k       = 388.4 # Stiffness of each tension spring, N/m
spring_offsets = [0.0, 0.012, 0.036] # Engagement offsets of the three staged springs, m

# Stiffness slider positions: minimum, medium and maximum
default_settings = [0.0, 0.020, 0.040] # m

# Rotation-test rig
rig_l1         = 0.310 # Arm length of the characterization rig, m
rig_phi_start  = np.deg2rad(120) # Passive equilibrium joint angle
rig_phi_end    = np.deg2rad(10)  # Rotation test ends bent to this angle
preferred_variant = '90% 12mm2' # Tendon variant selected for the prototype

# Available variants of the tendon
tendon_cross_sections = [8, 12] # mm²
tendon_pretensions    = [70, 80, 90] # %

# Winch servo selected for the prototype
servo_torque = 1.042 # N·m


#%% Reference values reported for the physical prototype

reference = sc.objdict(
    fit_a                 = 0.02,   # Quadratic coefficient of the measured spring fit, N/mm²
    fit_b                 = 0.45,   # Linear coefficient, N/mm
    fit_r_squared         = 0.9983,
    compression_forces    = [11.71, 15.00, 21.97], # Reaction force at 10 cm, N, per setting
    force_difference_pct  = 87.61,
    peak_accelerations    = [14.65, 22.43], # Minimum and maximum setting, m/s²
    peak_reduction_pct    = 34.7,
    lead_angle            = 0.158,  # rad
    torque_raise          = 0.2027, # N·m, as reported
    torque_lower          = 0.0057, # N·m, as reported
    required_torque       = 0.664,  # N·m, actuation torque incl. safety factor
)

self_locking_note = ('Note: the lead-screw derivation states the screw is self-locking "since mu > tan(lambda)", '
                     'but mu = 0.15 < tan(lambda) = 0.1592 for the prototype; the strict criterion is applied here, '
                     'which agrees with the conclusion that the mechanism is not self-locking.')


#%% Plotting defaults

def get_colors():
    '''
    Specify plot colors -- used in plotting.py.

    Colors from https://mycolor.space/?hex=%231B9756&sub=1
    '''
    c = sc.objdict()
    c.minimum  = '#1B9756'
    c.medium   = '#E0A63C'
    c.maximum  = '#B7231B'
    c.linear   = '#2F6690'
    c.quadratic = '#9E4770'
    c.raw      = '#aaaaaa'
    c.smooth   = '#000000'
    c.fit      = '#B7231B'
    return c


def get_setting_colors(settings):
    ''' Colors for a list of settings, from minimum to maximum '''
    c = get_colors()
    base = [c.minimum, c.medium, c.maximum]
    if len(settings) <= len(base):
        return base[:len(settings)]
    return sc.gridcolors(len(settings))


def setting_label(setting):
    ''' Label for a slider displacement in m, e.g. "20mm" '''
    value = round(float(setting)*1000, 6)
    return f'{value:g}mm'
