'''
Measurement-analysis pipeline: finite differences, Savitzky-Golay and
Butterworth smoothing, unbiased quadratic least squares, and CSV ingestion of
tensile-machine and tracker exports.
'''

import os
import numpy as np
import pandas as pd
import sciris as sc
import scipy.signal as sps
from . import defaults as tld
from . import base as tlb
from . import parameters as tlpar


__all__ = ['TimeSeries', 'FitResult', 'central_difference', 'savitzky_golay', 'butterworth_lowpass',
           'fit_unbiased_quadratic', 'r_squared', 'ingest_csv', 'process_drop_recording']


class TimeSeries(sc.prettyobj):
    '''
    A uniformly sampled signal. The values are stored read-only.

    Args:
        values (array): samples
        dt (float): sampling interval, s
        t0 (float): time of the first sample, s
        metadata (dict): e.g. name, units, and whether the series was resampled

    **Example**::

        ts = tl.TimeSeries(np.sin(np.arange(1000)*1e-3), dt=1e-3)
        acc = tl.central_difference(ts, order=2)
    '''

    def __init__(self, values, dt, t0=0.0, metadata=None):
        tlb.check_positive(dt, 'dt')
        tlb.check_finite(t0, 't0')
        values = np.array(values, dtype=tld.result_float)
        if values.ndim != 1:
            errormsg = f'A time series must be one-dimensional, not shape {values.shape}'
            raise tlb.DomainError(errormsg)
        values.flags.writeable = False
        self.t0 = float(t0)
        self.dt = float(dt)
        self.values = values
        self.metadata = sc.mergedicts({'name': None, 'units': None, 'resampled': False}, metadata)
        return

    def __len__(self):
        return len(self.values)

    @property
    def times(self):
        return self.t0 + np.arange(len(self.values))*self.dt

    def derive(self, values, **metadata):
        ''' A new series on the same grid '''
        return TimeSeries(values, dt=self.dt, t0=self.t0, metadata=sc.mergedicts(self.metadata, metadata))


class FitResult(sc.prettyobj):
    ''' Coefficients of F(x) = a·x² + b·x and the coefficient of determination '''

    def __init__(self, a, b, r_squared, n=None):
        self.a = float(a)
        self.b = float(b)
        self.r_squared = float(r_squared)
        self.n = n
        return

    def predict(self, x):
        x = np.asarray(x, dtype=float)
        return self.a*x**2 + self.b*x

    def to_dict(self):
        return {'a': self.a, 'b': self.b, 'r_squared': self.r_squared}


#%% Differentiation and filtering

def central_difference(series, order=1):
    '''
    First or second time derivative by finite differences. Interior points use
    the symmetric stencils; the endpoints use one-sided second-order stencils.
    The output has the same length as the input.

    Args:
        series (TimeSeries): at least 3 samples
        order (int): 1 or 2
    '''
    x = series.values
    n = len(x)
    dt = series.dt
    if n < 3:
        errormsg = f'Finite differences need at least 3 samples, not {n}'
        raise tlb.DomainError(errormsg)
    if order == 1:
        out = np.gradient(x, dt, edge_order=2)
    elif order == 2:
        out = np.empty(n)
        out[1:-1] = (x[2:] - 2*x[1:-1] + x[:-2])/dt**2
        if n >= 4:
            out[0]  = (2*x[0] - 5*x[1] + 4*x[2] - x[3])/dt**2
            out[-1] = (2*x[-1] - 5*x[-2] + 4*x[-3] - x[-4])/dt**2
        else:
            out[0] = out[-1] = out[1]
    else:
        errormsg = f'Derivative order must be 1 or 2, not {order}'
        raise tlb.DomainError(errormsg)
    return series.derive(out, derivative=order)


def savitzky_golay(series, window=21, poly_order=3):
    '''
    Savitzky-Golay smoothing: each sample is replaced by the value of the
    least-squares polynomial fitted over the window centered on it. Within half
    a window of either end, the window is truncated to the samples available on
    that side, and the polynomial fitted to the truncated window is evaluated at
    the sample. Polynomials up to poly_order pass through unchanged everywhere.
    Truncated windows with no more samples than poly_order use the highest order
    they can fit.
    '''
    if int(window) != window or window % 2 != 1:
        errormsg = f'The Savitzky-Golay window must be an odd number of samples, not {window}'
        raise tlb.DomainError(errormsg)
    if not (0 <= poly_order < window):
        errormsg = f'The polynomial order must satisfy 0 ≤ poly_order < window, not poly_order={poly_order} and window={window}'
        raise tlb.DomainError(errormsg)
    if len(series) < window:
        errormsg = f'The series has {len(series)} samples, fewer than the window of {window}'
        raise tlb.DomainError(errormsg)
    window, poly_order = int(window), int(poly_order)
    x = series.values
    smooth = sps.savgol_filter(x, window, poly_order, mode='interp') # Interior samples use the full window
    half = window//2
    for i in range(half):
        n_avail = half + 1 + i # Samples 0 .. i+half
        coeffs = sps.savgol_coeffs(n_avail, min(poly_order, n_avail-1), pos=i, use='dot')
        smooth[i] = coeffs @ x[:n_avail]
        smooth[-1-i] = coeffs[::-1] @ x[-n_avail:] # Mirror image at the end
    return series.derive(smooth, filtered='savitzky-golay')


def butterworth_lowpass(series, cutoff_hz=40.0, order=4, zero_phase=True):
    '''
    Low-pass Butterworth filter, designed from the analog prototype by the
    bilinear transform with frequency pre-warping and applied as cascaded
    second-order sections.

    Args:
        series (TimeSeries): the signal
        cutoff_hz (float): −3 dB frequency, Hz, below the Nyquist frequency
        order (int): filter order
        zero_phase (bool): filter forward and backward (squared magnitude, no phase lag), averaged with the backward-forward pass; otherwise one pass started in steady state at the first sample
    '''
    fs = 1/series.dt
    if not (0 < cutoff_hz < fs/2):
        errormsg = f'The cutoff must lie strictly between 0 and the Nyquist frequency {fs/2:g} Hz, not {cutoff_hz}'
        raise tlb.DomainError(errormsg)
    if int(order) != order or order < 1:
        errormsg = f'The filter order must be a positive integer, not {order}'
        raise tlb.DomainError(errormsg)
    sos = sps.butter(int(order), cutoff_hz, btype='low', output='sos', fs=fs)
    x = series.values
    if zero_phase:
        padlen = 3*(2*len(sos) + 1)
        if len(x) <= padlen:
            errormsg = f'Zero-phase filtering of order {order} needs more than {padlen} samples, not {len(x)}'
            raise tlb.DomainError(errormsg)
        # Average of the forward-backward and backward-forward passes, so mirrored input gives mirrored output
        out = 0.5*(sps.sosfiltfilt(sos, x) + sps.sosfiltfilt(sos, x[::-1])[::-1])
    else:
        zi = sps.sosfilt_zi(sos)*x[0]
        out, _ = sps.sosfilt(sos, x, zi=zi)
    return series.derive(out, filtered='butterworth')


#%% Fitting

def r_squared(y, y_fit):
    ''' Coefficient of determination with the total sum of squares taken about the mean '''
    y = np.asarray(y, dtype=float)
    ss_res = np.sum((y - y_fit)**2)
    ss_tot = np.sum((y - y.mean())**2)
    if ss_tot == 0:
        return 1.0 if ss_res == 0 else np.nan
    return 1 - ss_res/ss_tot


def fit_unbiased_quadratic(x, y):
    '''
    Least-squares fit of F(x) = a·x² + b·x with no constant term, from the 2×2
    normal equations.

    **Example**::

        x = np.linspace(0, 0.05, 51)
        fit = tl.fit_unbiased_quadratic(x, 20000*x**2 + 450*x) # a=20000, b=450, r_squared=1
    '''
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        errormsg = f'x and y must be 1D arrays of equal length, not shapes {x.shape} and {y.shape}'
        raise tlb.DomainError(errormsg)
    tlb.check_finite(x, 'x')
    tlb.check_finite(y, 'y')
    design = np.column_stack([x**2, x])
    if len(np.unique(x[x != 0])) < 2:
        errormsg = f'The fit needs at least 2 distinct non-zero x values; got {len(np.unique(x[x != 0]))}'
        raise tlb.RankError(errormsg)
    normal = design.T @ design
    rhs    = design.T @ y
    try:
        a, b = np.linalg.solve(normal, rhs)
    except np.linalg.LinAlgError as E:
        errormsg = f'Normal equations are singular: {E}'
        raise tlb.RankError(errormsg) from E
    fit = FitResult(a, b, r_squared(y, design @ np.array([a, b])), n=len(x))
    return fit


#%% Ingestion

def _resolve_column(df, column, path):
    ''' Find a column, accepting a millimetre version of a metre column '''
    if column in df.columns:
        return df[column], 1.0
    if column.endswith('_m'):
        alt = column[:-2] + '_mm'
        if alt in df.columns:
            return df[alt], 1000.0
    errormsg = f'Column "{column}" is missing from {path}; columns are {list(df.columns)}'
    raise tlb.IngestionError(errormsg)


def ingest_csv(path, columns, kind='table', verbose=0):
    '''
    Load a CSV export. Cells must all be numeric. Row numbers in errors count
    data rows from 1, not counting the header.

    Args:
        path (str): the file
        columns (list): required columns, e.g. ['h_m', 'F_N']; a "_m" column may also be given as "_mm"
        kind (str): "table" returns a dataframe with exactly these columns; "series" treats the first column as time and returns a TimeSeries of the second
        verbose (int): detail to print

    Returns:
        a dataframe, or a TimeSeries resampled to a uniform grid if needed
    '''
    if not os.path.isfile(path):
        errormsg = f'File {path} not found'
        raise tlb.IngestionError(errormsg)
    try:
        raw = pd.read_csv(path, dtype=str, skipinitialspace=True, keep_default_na=False)
    except pd.errors.EmptyDataError as E:
        errormsg = f'File {path} is empty'
        raise tlb.IngestionError(errormsg) from E
    if not len(raw):
        errormsg = f'File {path} has a header but no data rows'
        raise tlb.IngestionError(errormsg)

    data = {}
    for column in columns:
        col, divisor = _resolve_column(raw, column, path)
        values = pd.to_numeric(col.str.strip(), errors='coerce')
        bad = np.nonzero(values.isna().values)[0]
        if len(bad):
            row = bad[0] + 1
            errormsg = f'Non-numeric cell "{col.iloc[bad[0]]}" in {path}, row {row}, column "{col.name}"'
            raise tlb.IngestionError(errormsg)
        data[column] = values.values.astype(float)/divisor
    df = pd.DataFrame(data)

    if kind == 'table':
        return df
    elif kind != 'series':
        errormsg = f'Kind "{kind}" not recognized; choices are "table" and "series"'
        raise ValueError(errormsg)

    # Time series: check and regularize the time stamps
    if len(columns) != 2:
        errormsg = f'A series needs exactly a time and a value column, not {columns}'
        raise ValueError(errormsg)
    t = df[columns[0]].values
    y = df[columns[1]].values
    if len(t) < 2:
        errormsg = f'File {path} needs at least 2 samples to define a time step'
        raise tlb.IngestionError(errormsg)
    diffs = np.diff(t)
    if np.any(diffs <= 0):
        row = np.nonzero(diffs <= 0)[0][0] + 2
        errormsg = f'Time stamps in {path} must increase strictly; row {row} does not'
        raise tlb.IngestionError(errormsg)
    metadata = {'name': columns[1], 'units': columns[1].rsplit('_', 1)[-1], 'source': path}
    if np.allclose(diffs, diffs[0], rtol=1e-6, atol=0):
        dt = (t[-1] - t[0])/(len(t) - 1)
        return TimeSeries(y, dt=dt, t0=t[0], metadata=metadata)
    dt = float(np.median(diffs))
    n = int(np.floor((t[-1] - t[0])/dt + 1e-9)) + 1
    grid = t[0] + np.arange(n)*dt
    sc.printv(f'Resampling {path} to a uniform step of {dt:g} s ({len(t)} → {n} samples)', 1, verbose)
    metadata['resampled'] = True
    return TimeSeries(np.interp(grid, t, y), dt=dt, t0=t[0], metadata=metadata)


def process_drop_recording(series, pars=None, **kwargs):
    '''
    Acceleration from a tracked position: smooth the position with a
    Savitzky-Golay filter, differentiate twice, then smooth the acceleration with
    a Butterworth filter.

    Args:
        series (TimeSeries): tracked position, m
        pars (dict): filter parameters; see make_analysis_pars()
        kwargs (dict): passed to make_analysis_pars()

    Returns:
        df (dataframe): columns t_s, y_m, y_smooth_m, ay_mps2, ay_smooth_mps2
    '''
    pars = tlpar.make_analysis_pars(**sc.mergedicts(pars, kwargs))
    smooth = savitzky_golay(series, window=pars['sg_window'], poly_order=pars['sg_poly'])
    acc = central_difference(smooth, order=2)
    acc_smooth = butterworth_lowpass(acc, cutoff_hz=pars['bw_cutoff_hz'], order=pars['bw_order'], zero_phase=pars['bw_zero_phase'])
    df = pd.DataFrame({
        't_s':            series.times,
        'y_m':            series.values,
        'y_smooth_m':     smooth.values,
        'ay_mps2':        acc.values,
        'ay_smooth_mps2': acc_smooth.values,
    })
    return df
