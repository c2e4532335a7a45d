'''
Drop-test simulation. The pelvis slides on a vertical guide, so the leg has one
generalized coordinate, the pelvis height. The leg falls freely until the foot
tip touches the ground, after which the foot stays pinned and the joint springs
and damping decelerate the pelvis.
'''

import numpy as np
import sciris as sc
import scipy.optimize as spo
from . import defaults as tld
from . import base as tlb
from . import leg as tlleg
from . import statics as tlst


__all__ = ['DropScenario', 'DropTrace', 'DropSim', 'simulate_drop', 'drop_metrics', 'metrics_record',
           'peak_reduction', 'total_energy', 'metric_keys']


# Keys of the exported summary record
metric_keys = sc.odict(
    peak_acceleration       = 'peak_acceleration_mps2',
    max_deflection          = 'max_deflection_m',
    steady_state_deflection = 'steady_state_deflection_m',
    deceleration_duration   = 'deceleration_duration_s',
)


class DropScenario(tlb.ParsObj):
    '''
    A drop from a height onto a solid plate.

    Without damping, the total energy is conserved only while the leg stays
    within its kinematic range. With the default geometry at the 0 mm setting
    the springs cannot stop the 0.2 m drop before the leg folds flat, so the
    run raises GeometryError (at about t = 0.56 s). The 20 and 40 mm settings
    stay in range.

    Args:
        model (LegModel): the leg
        setting (StiffnessSetting or float): slider displacement
        drop_height (float): foot tip above the ground at release, m
        added_mass (float): mass added at the pelvis, kg
        integrator_dt (float): fixed step, s
        sim_duration (float): horizon, s
        damping_c (float): viscous damping, N·s/m (default: from the model)
    '''

    def __init__(self, model=None, setting=0.0, drop_height=0.20, added_mass=0.254, integrator_dt=1e-4, sim_duration=1.0, damping_c=None):
        model = tlleg.LegModel() if model is None else model
        damping_c = model.damping_c if damping_c is None else damping_c
        pars = dict(model=model, setting=tlleg.StiffnessSetting.make(setting), drop_height=drop_height, added_mass=added_mass,
                    integrator_dt=integrator_dt, sim_duration=sim_duration, damping_c=damping_c)
        super().__init__(pars)
        self.validate_pars()
        self.lock()
        return

    def validate_pars(self):
        tlb.check_positive(self['drop_height'], 'drop_height')
        tlb.check_positive(self['integrator_dt'], 'integrator_dt')
        tlb.check_nonnegative(self['added_mass'], 'added_mass')
        tlb.check_nonnegative(self['damping_c'], 'damping_c')
        if not self.mass > 0:
            errormsg = f'The moving mass must be positive, not {self.mass} kg'
            raise tlb.DomainError(errormsg)
        if not self['sim_duration'] > self.contact_time_estimate:
            errormsg = f'The horizon ({self["sim_duration"]} s) ends before the foot reaches the ground ({self.contact_time_estimate:0.4f} s)'
            raise tlb.DomainError(errormsg)
        return

    model   = property(lambda self: self.pars['model'])
    setting = property(lambda self: self.pars['setting'])

    @property
    def mass(self):
        ''' Moving mass: added mass plus the leg's lumped mass, kg '''
        return self['added_mass'] + self.model.lumped_mass

    @property
    def touch_height(self):
        ''' Pelvis height at which the foot tip touches the ground, m '''
        return self.model.rest_height + self.model.l_pelvis

    @property
    def contact_time_estimate(self):
        return np.sqrt(2*self['drop_height']/tld.gravity)


class DropTrace(sc.prettyobj):
    '''
    Result of a drop simulation: time grid, pelvis height, velocity and
    acceleration, the contact time, and the metrics derived from them.
    '''

    def __init__(self, time, pelvis_y, pelvis_vy, pelvis_ay, contact_time, touch_height, label=None):
        self.time      = time
        self.pelvis_y  = pelvis_y
        self.pelvis_vy = pelvis_vy
        self.pelvis_ay = pelvis_ay
        for arr in [self.time, self.pelvis_y, self.pelvis_vy, self.pelvis_ay]:
            arr.flags.writeable = False
        self.contact_time = contact_time
        self.touch_height = touch_height
        self.label = label
        self.peak_acceleration       = None
        self.max_deflection          = None
        self.steady_state_deflection = None
        self.deceleration_duration   = None
        if contact_time is not None:
            self.compute_metrics()
        return

    @property
    def npts(self):
        return len(self.time)

    @property
    def compression(self):
        ''' Compression of the leg from the touch-down pose, m (negative during flight) '''
        return self.touch_height - self.pelvis_y

    def compute_metrics(self):
        ''' Peak acceleration, maximum and steady-state deflection, and deceleration duration '''
        after = self.time >= self.contact_time
        self.peak_acceleration = float(np.max(self.pelvis_ay[after]))
        self.max_deflection = float(np.max(self.compression[after]))
        n_tail = max(1, self.npts//10)
        self.steady_state_deflection = float(np.mean(self.compression[-n_tail:]))

        # First upward zero crossing of the velocity after contact, interpolated between samples
        self.deceleration_duration = np.nan
        inds = np.nonzero(after & (self.pelvis_vy >= 0))[0]
        if len(inds):
            k = inds[0]
            t0, t1 = self.time[k-1], self.time[k]
            v0, v1 = self.pelvis_vy[k-1], self.pelvis_vy[k]
            t_zero = t1 if v1 == v0 else t0 - v0*(t1 - t0)/(v1 - v0)
            self.deceleration_duration = float(max(t_zero, self.contact_time) - self.contact_time)
        return


class DropSim(sc.prettyobj):
    '''
    Fixed-step classical Runge-Kutta simulation of a drop scenario.

    **Example**::

        sim = tl.DropSim(tl.DropScenario(setting=0.04))
        trace = sim.run()
    '''

    def __init__(self, scenario, label=None):
        self.scenario = scenario
        self.label = label if label is not None else scenario.setting.label
        self.initialized = False
        return

    def initialize(self):
        ''' Set up the time grid and the initial state at release '''
        s = self.scenario
        self.dt = s['integrator_dt']
        self.npts = int(round(s['sim_duration']/self.dt)) + 1
        self.time = np.arange(self.npts)*self.dt
        self.y  = np.zeros(self.npts, dtype=tld.result_float)
        self.vy = np.zeros(self.npts, dtype=tld.result_float)
        self.ay = np.zeros(self.npts, dtype=tld.result_float)
        self.mass  = s.mass
        self.c     = s['damping_c']
        self.touch = s.touch_height
        self.y[0]  = self.touch + s['drop_height']
        self.ay[0] = -tld.gravity
        self.t = 0
        self.in_contact = False
        self.contact_time = None
        self.initialized = True
        return

    def flight_rhs(self, y, v):
        return v, -tld.gravity

    def contact_rhs(self, y, v):
        ''' m·ÿ = −m·g + F_v(compression) − c·ẏ '''
        s = self.scenario
        F = tlst.vertical_force(s.model, s.setting, self.touch - y)
        return v, -tld.gravity + (F - self.c*v)/self.mass

    @staticmethod
    def rk4(rhs, y, v, h):
        ''' One classical fourth-order Runge-Kutta step '''
        k1y, k1v = rhs(y, v)
        k2y, k2v = rhs(y + 0.5*h*k1y, v + 0.5*h*k1v)
        k3y, k3v = rhs(y + 0.5*h*k2y, v + 0.5*h*k2v)
        k4y, k4v = rhs(y + h*k3y, v + h*k3v)
        y_new = y + h/6*(k1y + 2*k2y + 2*k3y + k4y)
        v_new = v + h/6*(k1v + 2*k2v + 2*k3v + k4v)
        return y_new, v_new

    def step(self):
        ''' Advance one time step, locating ground contact within the step if it happens '''
        t = self.t
        y, v = self.y[t], self.vy[t]
        dt = self.dt
        if self.in_contact:
            y_new, v_new = self.rk4(self.contact_rhs, y, v, dt)
        else:
            y_new, v_new = self.rk4(self.flight_rhs, y, v, dt)
            if y_new <= self.touch: # Contact during this step: split it at the event
                gap = lambda h: self.rk4(self.flight_rhs, y, v, h)[0] - self.touch
                try:
                    h_star = spo.brentq(gap, 0.0, dt, xtol=tld.event_xtol) if gap(0.0) > 0 else 0.0
                except (RuntimeError, ValueError) as E:
                    errormsg = f'Could not locate ground contact between t={self.time[t]:0.6f} s and t={self.time[t]+dt:0.6f} s: {E}'
                    raise tlb.ConvergenceError(errormsg) from E
                y_c, v_c = self.rk4(self.flight_rhs, y, v, h_star)
                self.in_contact = True
                self.contact_time = self.time[t] + h_star
                y_new, v_new = self.rk4(self.contact_rhs, self.touch, v_c, dt - h_star) if h_star < dt else (self.touch, v_c)
        self.y[t+1]  = y_new
        self.vy[t+1] = v_new
        self.ay[t+1] = (self.contact_rhs if self.in_contact else self.flight_rhs)(y_new, v_new)[1]
        self.t += 1
        return

    def run(self, verbose=0):
        '''
        Run the simulation.

        Args:
            verbose (int): level of detail to print

        Returns:
            trace (DropTrace): the result
        '''
        T = sc.tic()
        self.initialize()
        sc.printv(f'Running drop "{self.label}": {self.npts} points at dt={self.dt} s', 1, verbose)
        while self.t < self.npts - 1:
            try:
                self.step()
            except tlb.GeometryError as E:
                errormsg = f'Drop "{self.label}" aborted at t={self.time[self.t]:0.4f} s: {E}'
                raise tlb.GeometryError(errormsg) from E
            if verbose >= 2 and self.t % 1000 == 0:
                sc.printv(f'  t={self.time[self.t]:0.3f} s, y={self.y[self.t]:0.5f} m', 2, verbose)
        trace = self.finalize()
        sc.printv(f'Run finished after {sc.toc(T, output=True):0.2f} s.', 1, verbose)
        return trace

    def finalize(self):
        ''' Package the arrays as a trace '''
        self.trace = DropTrace(self.time, self.y, self.vy, self.ay, self.contact_time, self.touch, label=self.label)
        self.initialized = False
        return self.trace


def simulate_drop(scenario, verbose=0):
    ''' Simulate a drop scenario and return its DropTrace '''
    return DropSim(scenario).run(verbose=verbose)


def peak_reduction(peak_a, peak_b):
    ''' Reduction of the smaller peak relative to the larger one, in % '''
    high, low = max(peak_a, peak_b), min(peak_a, peak_b)
    if high <= 0:
        errormsg = f'Peak reduction needs a positive peak, not {high}'
        raise tlb.DomainError(errormsg)
    return (high - low)/high*100


def drop_metrics(trace, other=None):
    '''
    Summary of a drop trace.

    Args:
        trace (DropTrace): the trace
        other (DropTrace): if given, also report the peak-acceleration reduction between the two, %

    Returns:
        metrics (objdict): peak_acceleration, max_deflection, steady_state_deflection, deceleration_duration (and peak_reduction_pct)
    '''
    if trace.contact_time is None:
        errormsg = f'The foot never touched the ground within the {trace.time[-1]:0.3f} s horizon'
        raise tlb.EventMissingError(errormsg)
    metrics = sc.objdict({key: getattr(trace, key) for key in metric_keys.keys()})
    if other is not None:
        if other.contact_time is None:
            errormsg = 'The other trace has no ground contact to compare against'
            raise tlb.EventMissingError(errormsg)
        metrics.peak_reduction_pct = peak_reduction(trace.peak_acceleration, other.peak_acceleration)
    return metrics


def metrics_record(metrics):
    ''' The exported summary record, with unit-suffixed keys only '''
    return {label: float(metrics[key]) for key,label in metric_keys.items()}


def total_energy(scenario, trace):
    '''
    Kinetic, gravitational (relative to touch-down) and elastic energy at every
    sample of a trace, J.
    '''
    m = scenario.mass
    kinetic = 0.5*m*trace.pelvis_vy**2
    potential = m*tld.gravity*(trace.pelvis_y - trace.touch_height)
    elastic = np.zeros(trace.npts)
    if trace.contact_time is not None:
        for i in np.nonzero(trace.time > trace.contact_time)[0]:
            elastic[i] = tlst.elastic_energy(scenario.model, scenario.setting, trace.compression[i])
    return kinetic + potential + elastic
