'''
Set the parameters for Tensileg, and load them from config files.
'''

import os
import numpy as np
import sciris as sc
from . import defaults as tld
from . import base as tlb
from . import requirements as tlr


__all__ = ['make_leg_pars', 'make_leadscrew_pars', 'make_actuation_pars', 'make_stiffness_pars',
           'make_compression_pars', 'make_drop_pars', 'make_analysis_pars', 'make_rig_pars', 'make_run_pars',
           'ToolConfig', 'load_config', 'unit_choices']


unit_choices = ['m', 'mm']


def _apply_kwargs(pars, kwargs, block):
    ''' Update the defaults, rejecting keys that do not exist '''
    mismatches = [key for key in kwargs.keys() if key not in pars]
    if len(mismatches):
        errormsg = f'Key(s) {mismatches} not found in the {block} parameters; available keys are {list(pars.keys())}'
        raise tlb.ConfigError(errormsg)
    pars.update(kwargs)
    return pars


def make_leg_pars(**kwargs):
    '''
    Set the parameters of the leg model.

    Returns:
        pars (dict): the leg parameters
    '''
    pars = {}

    # Geometry
    pars['l_pelvis']              = 0.13 # Rigid offset from the hip up to the pelvis, m
    pars['l_femur']               = 0.35 # Hip to knee, m
    pars['l_tibia']               = 0.35 # Knee to foot tip, m
    pars['total_extended_length'] = 0.83 # Pelvis to foot tip with the leg straight, m; must equal the sum of the segments
    pars['rest_flexion_hip']      = np.deg2rad(25)  # Hip flexion in the rest pose, rad
    pars['rest_flexion_knee']     = np.deg2rad(-25) # Knee flexion in the rest pose, rad; the knee interior angle is π − (hip − knee)

    # Actuation
    pars['r_drum']    = 0.005 # Winch drum radius, m
    pars['r_tristar'] = 0.060 # Deflection pulley radius in the tristar pivot, i.e. the joint moment arm, m

    # Parallel-slack spring system of each joint
    pars['springs'] = {
        'hip':  {'k': tld.spring_k, 'offsets': list(tld.spring_offsets)},
        'knee': {'k': tld.spring_k, 'offsets': list(tld.spring_offsets)},
    }

    # Dynamics
    pars['lumped_mass'] = 1.0 # Mass of the leg lumped at the pelvis, kg
    pars['damping_c']   = 5.0 # Viscous damping of the vertical motion, N·s/m

    return _apply_kwargs(pars, kwargs, 'leg')


def make_leadscrew_pars(**kwargs):
    ''' Lead screw of the stiffness slider; defaults are the prototype's '''
    pars = {}
    pars['D_m']      = 0.008 # Mean diameter, m
    pars['L']        = 0.004 # Lead, m/rev
    pars['mu']       = 0.15  # Friction coefficient
    pars['F_axial']  = 320.0 # Axial force, N; replaced by n_springs·per_spring_force if the latter is given
    pars['per_spring_force'] = None # Pretension force of each spring loading the nut, N
    pars['n_springs']        = 4    # Number of springs loading the nut (two joints, maximum load case)
    pars['motor_torque_available'] = 0.45 # Stepper motor torque, N·m
    return _apply_kwargs(pars, kwargs, 'leadscrew')


def make_actuation_pars(**kwargs):
    ''' Sizing of the winch actuation '''
    pars = {}
    pars['payload_mass']  = 1.0   # Mass lifted by the hip, kg
    pars['safety_factor'] = 1.957 # Dimensionless factor applied to the static moment
    pars['servo_torque']  = tld.servo_torque # Rated torque of the winch servo, N·m
    return _apply_kwargs(pars, kwargs, 'actuation')


def make_stiffness_pars(**kwargs):
    ''' Rotary stiffness sweeps of a single pulley '''
    pars = {}
    pars['r_p'] = 0.05   # Pulley radius, m
    pars['k_s'] = 500.0  # Linear spring stiffness, N/m
    pars['k_c'] = 100.0  # Cable stiffness, N/m
    pars['k_l'] = 450.0  # Linear coefficient of the quadratic spring, N/m
    pars['k_q'] = 20000.0 # Quadratic coefficient, N/m²
    pars['pretension_forces'] = [0.0, 10.0, 20.0] # Pretension sweep, N
    pars['theta_max'] = 1.0 # Sweep rotations over [−theta_max, theta_max], rad
    pars['n_theta']   = 101 # Number of rotations in the sweep
    return _apply_kwargs(pars, kwargs, 'stiffness')


def make_compression_pars(**kwargs):
    ''' Quasi-static compression scenario '''
    pars = {}
    pars['max_compression'] = 0.10 # Vertical compression at the end of the sweep, m
    pars['step']            = 5e-4 # Grid step, m
    pars['settings']        = list(tld.default_settings) # Slider displacements to sweep, m
    return _apply_kwargs(pars, kwargs, 'compression')


def make_drop_pars(**kwargs):
    ''' Drop-test scenario '''
    pars = {}
    pars['drop_height']   = 0.20  # Foot tip above the ground plate at release, m
    pars['added_mass']    = 0.254 # Mass added at the pelvis, kg
    pars['integrator_dt'] = 1e-4  # Fixed integration step, s
    pars['sim_duration']  = 1.0   # Horizon, s
    pars['settings']      = list(tld.default_settings) # Slider displacements to simulate, m
    return _apply_kwargs(pars, kwargs, 'drop')


def make_analysis_pars(**kwargs):
    ''' Filtering of 1 kHz drop recordings '''
    pars = {}
    pars['sg_window']     = 21   # Savitzky-Golay window, samples (odd)
    pars['sg_poly']       = 3    # Savitzky-Golay polynomial order
    pars['bw_order']      = 4    # Butterworth order
    pars['bw_cutoff_hz']  = 40.0 # Butterworth cutoff, Hz
    pars['bw_zero_phase'] = True # Forward-backward filtering
    return _apply_kwargs(pars, kwargs, 'analysis')


def make_rig_pars(**kwargs):
    ''' Joint characterization rig '''
    pars = {}
    pars['l1']        = tld.rig_l1 # Arm length, m
    pars['preferred'] = tld.preferred_variant # Variant to flag when it dominates
    return _apply_kwargs(pars, kwargs, 'rig')


def make_run_pars(**kwargs):
    ''' Execution of batches '''
    pars = {}
    pars['parallel'] = False # Run multi-setting batches in parallel
    pars['verbose']  = 0     # Detail to print -- 0 (silent), 1 (default), 2 (everything)
    return _apply_kwargs(pars, kwargs, 'run')


#%% Config files

length = 'length' # Marker for keys converted from mm
plain  = 'plain'

spring_schema = {'k': plain, 'offsets': length}

config_schema = {
    'units':       {'input': plain},
    'leg':         {'l_pelvis': length, 'l_femur': length, 'l_tibia': length, 'total_extended_length': length,
                    'rest_flexion_hip_deg': plain, 'rest_flexion_knee_deg': plain, 'r_drum': length,
                    'r_tristar': length, 'lumped_mass': plain, 'damping_c': plain},
    'springs':     dict(spring_schema, hip=spring_schema, knee=spring_schema),
    'leadscrew':   {'D_m': length, 'L': length, 'mu': plain, 'F_axial': plain, 'per_spring_force': plain,
                    'n_springs': plain, 'motor_torque_available': plain},
    'actuation':   {'payload_mass': plain, 'safety_factor': plain, 'servo_torque': plain},
    'stiffness':   {'r_p': length, 'k_s': plain, 'k_c': plain, 'k_l': plain, 'k_q': plain,
                    'pretension_forces': plain, 'theta_max': plain, 'n_theta': plain},
    'compression': {'max_compression': length, 'step': length, 'settings': length},
    'drop':        {'drop_height': length, 'added_mass': plain, 'integrator_dt': plain, 'sim_duration': plain,
                    'settings': length},
    'analysis':    {'sg_window': plain, 'sg_poly': plain, 'bw_order': plain, 'bw_cutoff_hz': plain, 'bw_zero_phase': plain},
    'rig':         {'l1': length, 'preferred': plain},
    'characterize':{'variants': plain},
    'run':         {'parallel': plain, 'verbose': plain},
}

variant_schema = {'label': plain, 'cross_section_mm2': plain, 'pretension_pct': plain, 'rotation': plain, 'compression': plain}


def _from_mm(value):
    ''' Divide by 1000 so that e.g. 12 mm becomes the nearest double to 0.012 m '''
    if isinstance(value, list):
        return [_from_mm(v) for v in value]
    return value/1000


def _check_table(table, schema, location, source):
    ''' Reject unknown keys, giving their location '''
    if not isinstance(table, dict):
        errormsg = f'"{location}" in {source} must be a table, not {type(table).__name__}'
        raise tlb.ConfigError(errormsg)
    for key in table.keys():
        if key not in schema:
            where = f'{location}.{key}' if location else key
            errormsg = f'Unknown config key "{where}" in {source}; valid keys here are {list(schema.keys())}'
            raise tlb.ConfigError(errormsg)
        if isinstance(schema[key], dict):
            _check_table(table[key], schema[key], f'{location}.{key}' if location else key, source)
    return


def _convert(table, schema, units):
    ''' Convert the length-valued entries of a checked table to m '''
    output = {}
    for key,value in table.items():
        kind = schema[key]
        if isinstance(kind, dict):
            output[key] = _convert(value, kind, units)
        elif kind == length and units == 'mm':
            output[key] = _from_mm(value)
        else:
            output[key] = value
    return output


class ToolConfig(sc.prettyobj):
    '''
    Fully parsed configuration: one parameter dict per block, filled with the
    defaults for anything the file does not set. Lengths are in m.

    Args:
        raw (dict): parsed TOML content (default: empty)
        units (str): "m" or "mm", the unit of lengths in raw; overrides units.input
        source (str): where raw came from, used in error messages
    '''

    def __init__(self, raw=None, units=None, source='<defaults>', folder=None):
        raw = sc.mergedicts(raw)
        _check_table(raw, config_schema, '', source)
        file_units = raw.get('units', {}).get('input', 'm')
        units = file_units if units is None else units
        if units not in unit_choices:
            errormsg = f'Config key "units.input" must be one of {unit_choices}, not "{units}" (in {source})'
            raise tlb.ConfigError(errormsg)
        self.units  = units
        self.source = source
        self.folder = folder if folder is not None else os.getcwd()
        raw = _convert(raw, config_schema, units)

        # Leg: angles in the file are in degrees, and spring blocks can be shared or per joint
        leg = sc.dcp(raw.get('leg', {}))
        for joint in ['hip', 'knee']:
            key = f'rest_flexion_{joint}_deg'
            if key in leg:
                leg[f'rest_flexion_{joint}'] = np.deg2rad(leg.pop(key))
        springs = raw.get('springs', {})
        if springs:
            defaults = make_leg_pars()['springs']
            shared = {k:v for k,v in springs.items() if k not in ['hip', 'knee']}
            leg['springs'] = {joint: sc.mergedicts(defaults[joint], shared, springs.get(joint)) for joint in ['hip', 'knee']}

        builders = dict(leg=make_leg_pars, leadscrew=make_leadscrew_pars, actuation=make_actuation_pars,
                        stiffness=make_stiffness_pars, compression=make_compression_pars, drop=make_drop_pars,
                        analysis=make_analysis_pars, rig=make_rig_pars, run=make_run_pars)
        for block,builder in builders.items():
            kwargs = leg if block == 'leg' else raw.get(block, {})
            setattr(self, block, sc.objdict(builder(**kwargs)))

        # Characterization variants
        self.variants = []
        for v,variant in enumerate(raw.get('characterize', {}).get('variants', [])):
            _check_table(variant, variant_schema, f'characterize.variants[{v}]', source)
            for key in ['rotation', 'compression']:
                if key not in variant:
                    errormsg = f'Config key "characterize.variants[{v}].{key}" is required (in {source})'
                    raise tlb.ConfigError(errormsg)
            self.variants.append(sc.objdict(variant))
        return

    def resolve(self, path):
        ''' Resolve a data path relative to the config file's folder '''
        if os.path.isabs(path):
            return path
        return os.path.join(self.folder, path)


def load_config(path=None, units=None):
    '''
    Parse a TOML config file completely, before any computation.

    Args:
        path (str): the file (if None, use all defaults)
        units (str): "m" or "mm", overriding the file's units.input

    Returns:
        config (ToolConfig)

    **Example**::

        config = tl.load_config('configs/prototype.toml')
        model = tl.LegModel(**config.leg)
    '''
    if path is None:
        return ToolConfig(units=units)
    tomllib = tlr.check_toml()
    try:
        with open(path, 'rb') as f:
            raw = tomllib.load(f)
    except FileNotFoundError as E:
        errormsg = f'Config file {path} not found'
        raise tlb.ConfigError(errormsg) from E
    except tomllib.TOMLDecodeError as E:
        errormsg = f'Could not parse config file {path}: {E}'
        raise tlb.ConfigError(errormsg) from E
    folder = os.path.dirname(os.path.abspath(path))
    return ToolConfig(raw, units=units, source=path, folder=folder)
