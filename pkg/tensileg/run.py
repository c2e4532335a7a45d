'''
Functions for running batches of scenarios across stiffness settings.
'''

import numpy as np
import sciris as sc
from . import base as tlb
from . import leg as tlleg
from . import statics as tlst
from . import dynamics as tldyn


__all__ = ['single_compress', 'single_drop', 'multi_compress', 'multi_drop', 'summarize_drops']


def _handle_settings(settings):
    ''' Convert to StiffnessSettings sorted by slider displacement, rejecting duplicates '''
    settings = [tlleg.StiffnessSetting.make(s) for s in sc.tolist(settings)]
    if not len(settings):
        errormsg = 'At least one stiffness setting is required'
        raise ValueError(errormsg)
    settings = sorted(settings, key=lambda s: s.slider_displacement)
    displacements = [s.slider_displacement for s in settings]
    if len(set(displacements)) != len(displacements):
        errormsg = f'Duplicate stiffness settings: {displacements}'
        raise ValueError(errormsg)
    return settings


def single_compress(model, setting, max_compression=0.10, step=5e-4, verbose=0):
    '''
    Convenience function for one compression sweep, mostly used for
    parallelization.

    Returns:
        df (dataframe): columns compression_m and force_N
    '''
    scenario = tlst.CompressionScenario(model=model, setting=setting, max_compression=max_compression, step=step)
    return tlst.compression_sweep(scenario, verbose=verbose)


def single_drop(model, setting, scen_args=None, verbose=0):
    ''' Convenience function for one drop simulation; returns a DropTrace '''
    scenario = tldyn.DropScenario(model=model, setting=setting, **sc.mergedicts(scen_args))
    return tldyn.simulate_drop(scenario, verbose=verbose)


def multi_compress(model, settings, max_compression=0.10, step=5e-4, parallel=False, verbose=0, par_args=None):
    '''
    Compression sweeps for several settings, in parallel or serially.

    Args:
        model (LegModel): the leg
        settings (list): slider displacements in m, or StiffnessSettings
        max_compression (float): end of each sweep, m
        step (float): grid step, m
        parallel (bool): whether to run the settings with sc.parallelize()
        verbose (int): detail to print
        par_args (dict): passed to sc.parallelize()

    Returns:
        sweeps (odict): one dataframe per setting label, ordered by slider displacement

    **Example**::

        sweeps = tl.multi_compress(tl.LegModel(), [0, 0.02, 0.04])
        sweeps['40mm'].force_N.iloc[-1]
    '''
    settings = _handle_settings(settings)
    kwargs = dict(model=model, max_compression=max_compression, step=step, verbose=verbose)
    if parallel:
        results = sc.parallelize(single_compress, iterkwargs={'setting': settings}, kwargs=kwargs, **sc.mergedicts(par_args))
    else:
        results = [single_compress(setting=s, **kwargs) for s in settings]
    return sc.odict({s.label: df for s,df in zip(settings, results)})


def multi_drop(model, settings, scen_args=None, parallel=False, verbose=0, par_args=None):
    '''
    Drop simulations for several settings. Each scenario is independent, so the
    batch can run in parallel; the output order is always by slider displacement.

    Args:
        model (LegModel): the leg
        settings (list): slider displacements in m, or StiffnessSettings
        scen_args (dict): passed to DropScenario, e.g. drop_height or added_mass
        parallel (bool): whether to run the settings with sc.parallelize()
        verbose (int): detail to print
        par_args (dict): passed to sc.parallelize()

    Returns:
        traces (odict): one DropTrace per setting label
    '''
    settings = _handle_settings(settings)
    T = sc.tic()
    kwargs = dict(model=model, scen_args=scen_args, verbose=verbose)
    if parallel:
        traces = sc.parallelize(single_drop, iterkwargs={'setting': settings}, kwargs=kwargs, **sc.mergedicts(par_args))
    else:
        traces = [single_drop(setting=s, **kwargs) for s in settings]
    sc.printv(f'{len(settings)} drops finished after {sc.toc(T, output=True):0.2f} s.', 1, verbose)
    return sc.odict({s.label: trace for s,trace in zip(settings, traces)})


def summarize_drops(traces):
    '''
    Summary of a batch of drops: the metrics record of every setting, and the
    peak-acceleration reduction between the softest and the stiffest setting.

    Returns:
        summary (dict): "settings" (one record per label) and "peak_reduction_pct" (None for a single setting)
    '''
    summary = {'settings': {}}
    for label,trace in traces.items():
        summary['settings'][label] = tldyn.metrics_record(tldyn.drop_metrics(trace))
    summary['peak_reduction_pct'] = None
    if len(traces) > 1:
        first, last = traces[0], traces[-1]
        if first.peak_acceleration is None or last.peak_acceleration is None:
            errormsg = 'Cannot compare peak accelerations of drops without ground contact'
            raise tlb.EventMissingError(errormsg)
        summary['peak_reduction_pct'] = float(tldyn.peak_reduction(first.peak_acceleration, last.peak_acceleration))
    peaks = np.array([rec['peak_acceleration_mps2'] for rec in summary['settings'].values()])
    summary['peaks_increasing'] = bool(np.all(np.diff(peaks) > 0))
    return summary
