'''
Test differentiation, filtering, fitting and CSV ingestion.
'''

#%% Imports
import os
import pathlib
import tempfile
import numpy as np
import pytest
import sciris as sc
import scipy.signal as sps
import tensileg as tl

datadir = os.path.join(sc.thisdir(__file__), os.pardir, 'configs', 'data')


#%% Define the tests

def test_differences():
    sc.heading('Finite differences')

    dt = 1e-3
    t = np.arange(100)*dt
    series = tl.TimeSeries(3*t**3 - t**2 + 2*t, dt=dt)
    vel = tl.central_difference(series, order=1)
    acc = tl.central_difference(series, order=2)
    assert np.allclose(vel.values, 9*t**2 - 2*t + 2, atol=1e-5)
    assert np.allclose(acc.values, 18*t - 2, atol=1e-6)
    assert len(acc) == len(series)
    assert acc.metadata['derivative'] == 2

    with pytest.raises(tl.DomainError):
        tl.central_difference(tl.TimeSeries([1, 2], dt=dt))
    with pytest.raises(tl.DomainError):
        tl.central_difference(series, order=3)

    return acc


def test_filters():
    sc.heading('Savitzky-Golay and Butterworth filters')

    dt = 1e-3
    t = np.arange(500)*dt
    cubic = tl.TimeSeries(5*t**3 - 2*t**2 + t + 0.3, dt=dt)
    smooth = tl.savitzky_golay(cubic, window=21, poly_order=3)
    assert np.allclose(smooth.values, cubic.values, rtol=0, atol=1e-9)

    with pytest.raises(tl.DomainError):
        tl.savitzky_golay(cubic, window=20)
    with pytest.raises(tl.DomainError):
        tl.savitzky_golay(cubic, window=21, poly_order=21)

    constant = tl.TimeSeries(np.full(500, 2.5), dt=dt)
    assert np.allclose(tl.butterworth_lowpass(constant).values, 2.5, atol=1e-9)
    assert np.allclose(tl.butterworth_lowpass(constant, zero_phase=False).values, 2.5, atol=1e-9)

    # A 200 Hz tone is removed by the 40 Hz low-pass
    tone = tl.TimeSeries(np.sin(2*np.pi*200*t), dt=dt)
    filtered = tl.butterworth_lowpass(tone, cutoff_hz=40, order=4)
    assert np.max(np.abs(filtered.values[50:-50])) < 0.01

    with pytest.raises(tl.DomainError):
        tl.butterworth_lowpass(tone, cutoff_hz=600)

    return filtered


def test_savitzky_golay_edges():
    sc.heading('Savitzky-Golay edges and noise gain')

    rng = np.random.default_rng(1)
    noise = tl.TimeSeries(rng.standard_normal(200), dt=1e-3)
    window, poly_order = 21, 3
    smooth = tl.savitzky_golay(noise, window=window, poly_order=poly_order).values

    # Each edge sample is the cubic fitted to the samples available within half a window
    half = window//2
    x = noise.values
    for i in [0, 3, half-1]:
        idx = np.arange(i + half + 1)
        start = np.polyval(np.polyfit(idx, x[idx], poly_order), i)
        end = np.polyval(np.polyfit(idx, x[::-1][idx], poly_order), i)
        assert smooth[i] == pytest.approx(start, abs=1e-10)
        assert smooth[-1-i] == pytest.approx(end, abs=1e-10)

    # Interior samples use the centered window
    center = np.polyval(np.polyfit(np.arange(window), x[50:50+window], poly_order), half)
    assert smooth[50+half] == pytest.approx(center, abs=1e-10)

    # White noise variance shrinks by the sum of squared kernel weights
    white = tl.TimeSeries(rng.standard_normal(100_000), dt=1e-3)
    ratio = np.var(tl.savitzky_golay(white, window=11, poly_order=3).values[5:-5])/np.var(white.values)
    gain = np.sum(sps.savgol_coeffs(11, 3)**2)
    assert ratio == pytest.approx(gain, rel=0.1)

    # Short truncated windows fall back to the highest order they can fit
    short = tl.savitzky_golay(noise, window=5, poly_order=4)
    assert np.all(np.isfinite(short.values))

    return smooth


def test_butterworth_response():
    sc.heading('Butterworth magnitude response and symmetry')

    fs = 1000
    dt = 1/fs
    t = np.arange(4000)*dt
    cutoff = 40

    # At the cutoff a single pass of order 2 halves the power
    tone = tl.TimeSeries(np.sin(2*np.pi*cutoff*t), dt=dt)
    out = tl.butterworth_lowpass(tone, cutoff_hz=cutoff, order=2, zero_phase=False).values
    settled = slice(2000, None)
    ratio = np.sqrt(2*np.mean(out[settled]**2))
    assert ratio == pytest.approx(1/np.sqrt(2), rel=0.01)

    # A decade above the cutoff, order 4 attenuates by at least 75 dB
    high = tl.TimeSeries(np.sin(2*np.pi*10*cutoff*t), dt=dt)
    out = tl.butterworth_lowpass(high, cutoff_hz=cutoff, order=4, zero_phase=False).values
    amplitude = np.sqrt(2*np.mean(out[settled]**2))
    assert 20*np.log10(amplitude) <= -75

    # Zero-phase output of a symmetric input is symmetric about the same midpoint
    for n in [201, 4001]:
        tt = np.arange(n)*dt
        mid = tt[n//2]
        for y in [1 + (tt - mid)**2, np.exp(-((tt - mid)/0.02)**2)]:
            filtered = tl.butterworth_lowpass(tl.TimeSeries(y, dt=dt)).values
            assert np.max(np.abs(filtered - filtered[::-1])) <= 1e-8

    return filtered


def test_drop_pipeline():
    sc.heading('Drop recording pipeline')

    dt = 1e-3
    t = np.arange(400)*dt
    y = 1.0 - 0.5*tl.gravity*t**2 + 2e-5*np.sin(2*np.pi*150*t)
    df = tl.process_drop_recording(tl.TimeSeries(y, dt=dt))
    assert list(df.columns) == ['t_s', 'y_m', 'y_smooth_m', 'ay_mps2', 'ay_smooth_mps2']
    middle = df['ay_smooth_mps2'].values[100:300]
    assert np.allclose(middle, -tl.gravity, atol=0.1)

    series = tl.ingest_csv(os.path.join(datadir, 'drop_tracker.csv'), ['t_s', 'y_m'], kind='series')
    recording = tl.process_drop_recording(series, sg_window=31)
    assert len(recording) == 601
    assert np.all(np.isfinite(recording.values))

    return recording


def test_fit():
    sc.heading('Unbiased quadratic fit')

    x = np.linspace(0, 0.05, 51)
    fit = tl.fit_unbiased_quadratic(x, 20000*x**2 + 450*x)
    assert fit.a == pytest.approx(20000, rel=1e-9)
    assert fit.b == pytest.approx(450, rel=1e-9)
    assert fit.r_squared == pytest.approx(1.0)

    # The staged spring curve is close to a quadratic
    net = tl.staged_network()
    staged = tl.fit_unbiased_quadratic(x, [net.force(xi) for xi in x])
    assert staged.r_squared >= 0.99
    assert staged.a > 0

    assert tl.r_squared([1, 2, 3], [1, 2, 3]) == 1
    assert np.isnan(tl.r_squared([2, 2, 2], [1, 2, 3]))

    with pytest.raises(tl.RankError):
        tl.fit_unbiased_quadratic([0, 0, 0], [1, 2, 3])
    with pytest.raises(tl.RankError):
        tl.fit_unbiased_quadratic([0.01, 0.01, 0], [1, 1, 0])

    return staged


def test_ingestion(tmp_path=None):
    sc.heading('CSV ingestion')

    folder = pathlib.Path(tempfile.mkdtemp() if tmp_path is None else tmp_path)

    def write(name, text):
        path = folder/name
        path.write_text(text)
        return str(path)

    # Millimetre columns are converted
    df = tl.ingest_csv(write('mm.csv', 'x_mm,F_N\n0,0\n12,4.5\n'), ['x_m', 'F_N'])
    assert df['x_m'].tolist() == [0, 0.012]

    with pytest.raises(tl.IngestionError, match='row 2, column "F_N"'):
        tl.ingest_csv(write('bad.csv', 'x_m,F_N\n0,0\n0.1,abc\n'), ['x_m', 'F_N'])
    with pytest.raises(tl.IngestionError, match='missing'):
        tl.ingest_csv(write('cols.csv', 'x,F\n0,0\n'), ['x_m', 'F_N'])
    with pytest.raises(tl.IngestionError):
        tl.ingest_csv(write('empty.csv', ''), ['x_m', 'F_N'])
    with pytest.raises(tl.IngestionError):
        tl.ingest_csv(str(folder/'not_there.csv'), ['x_m', 'F_N'])
    with pytest.raises(tl.IngestionError, match='row 3'):
        tl.ingest_csv(write('order.csv', 't_s,y_m\n0,1\n0.002,1\n0.001,1\n'), ['t_s', 'y_m'], kind='series')

    # Non-uniform time stamps are resampled to the median step
    t = np.array([0, 0.001, 0.002, 0.0035, 0.0045, 0.0055, 0.0065])
    text = 't_s,y_m\n' + ''.join(f'{ti!r},{2*ti!r}\n' for ti in t)
    series = tl.ingest_csv(write('jitter.csv', text), ['t_s', 'y_m'], kind='series')
    assert series.metadata['resampled']
    assert series.dt == pytest.approx(0.001)
    assert np.allclose(series.values, 2*series.times, atol=1e-12) # Linear data is interpolated exactly

    uniform = tl.ingest_csv(write('uniform.csv', 't_s,y_m\n0,1\n0.001,2\n0.002,3\n'), ['t_s', 'y_m'], kind='series')
    assert not uniform.metadata['resampled']

    return series


#%% Run as a script
if __name__ == '__main__':

    T = sc.tic()

    acc       = test_differences()
    filtered  = test_filters()
    smooth    = test_savitzky_golay_edges()
    response  = test_butterworth_response()
    recording = test_drop_pipeline()
    staged    = test_fit()
    series    = test_ingestion()

    sc.toc(T)
    print('Done.')
