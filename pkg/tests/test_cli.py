'''
Test the command line against the shipped configs and saved golden outputs.

To refresh the golden files after an intentional change, run this file as a
script with do_save = True.
'''

#%% Imports
import os
import json
import filecmp
import shutil
import tempfile
import pandas as pd
import sciris as sc
import tensileg as tl

do_save = False
rootdir = os.path.join(sc.thisdir(__file__), os.pardir)
configdir = os.path.join(rootdir, 'configs')
datadir = os.path.join(configdir, 'data')
golden_dir = sc.thisdir(__file__, 'golden')

prototype = os.path.join(configdir, 'prototype.toml')
cases = sc.odict(
    stiffness    = ['stiffness', '--config', prototype],
    leadscrew    = ['leadscrew', '--config', prototype],
    size         = ['size', '--config', prototype],
    compress     = ['compress', '--config', prototype],
    drop         = ['drop', '--config', prototype, '--setting', '0', '--setting', '20', '--setting', '40'],
    fit          = ['fit', '--config', prototype, '--input', os.path.join(datadir, 'spring_staged.csv')],
    filter       = ['filter', '--config', prototype, '--input', os.path.join(datadir, 'drop_tracker.csv')],
    characterize = ['characterize', '--config', os.path.join(configdir, 'characterize.toml')],
)


def run_case(name, folder=None):
    ''' Run one case into a fresh folder and return the folder '''
    folder = tempfile.mkdtemp() if folder is None else folder
    status = tl.cli.run(cases[name] + ['--out', folder])
    assert status == 0, f'Case "{name}" exited with {status}'
    return folder


def save_golden(do_save=do_save):
    ''' Refresh the golden outputs '''
    print('Updating golden outputs...')
    for name in cases.keys():
        folder = run_case(name)
        if do_save:
            target = os.path.join(golden_dir, name)
            shutil.rmtree(target, ignore_errors=True)
            shutil.copytree(folder, target)
    print('Done.')
    return


def compare_folders(old, new):
    ''' Return the files that differ or are missing between two folders '''
    old_files = sorted(os.listdir(old))
    new_files = sorted(os.listdir(new))
    errormsg = ''
    if old_files != new_files:
        errormsg += f'Files differ: {sorted(set(old_files) ^ set(new_files))}\n'
    _, mismatch, errors = filecmp.cmpfiles(old, new, sorted(set(old_files) & set(new_files)), shallow=False)
    if mismatch or errors:
        errormsg += f'Contents differ: {mismatch + errors}\n'
    return errormsg


#%% Define the tests

def test_golden():
    sc.heading('Golden outputs')

    for name in cases.keys():
        first = run_case(name)
        second = run_case(name)
        errormsg = compare_folders(first, second)
        assert not errormsg, f'Case "{name}" is not deterministic:\n{errormsg}'

        golden = os.path.join(golden_dir, name)
        if not os.path.isdir(golden):
            errormsg = f'No golden output for case "{name}" in {golden_dir}; run save_golden(do_save=True) and commit the files'
            raise AssertionError(errormsg)
        errormsg = compare_folders(golden, first)
        if errormsg:
            errormsg += 'If this is intentional, please rerun save_golden(do_save=True) and commit.'
            raise AssertionError(f'Case "{name}" changed from the golden output:\n{errormsg}')

    return


def test_outputs():
    sc.heading('Output contents')

    folder = run_case('leadscrew')
    report = sc.loadjson(os.path.join(folder, 'leadscrew.json'))
    assert abs(report['modes']['paper-compat']['torque_raise'] - 0.2027) < 5e-4
    assert abs(report['modes']['standard']['torque_raise'] - 0.4054) < 1e-3
    assert abs(report['lead_angle_rad'] - 0.1578) < 1e-3
    assert report['self_locking']['self_locking'] is False
    assert 'mu = 0.15 < tan(lambda)' in report['note']

    folder = run_case('drop')
    files = sorted(os.listdir(folder))
    for label in ['0mm', '20mm', '40mm']:
        assert f'drop_{label}.csv' in files
        assert f'drop_{label}.json' in files
    summary = sc.loadjson(os.path.join(folder, 'drop_summary.json'))
    assert summary['peaks_increasing'] is True
    assert summary['peak_reduction_pct'] >= 25
    with open(os.path.join(folder, 'drop.gp')) as f:
        assert '"drop_40mm.csv"' in f.read()

    folder = run_case('characterize')
    table = sc.loadjson(os.path.join(folder, 'characterize.json'))
    assert table['dominant'] == '90% 12mm2'
    assert table['preferred_dominates'] is True

    return summary


def test_units():
    sc.heading('Configs in m and mm give identical outputs')

    in_m = tempfile.mkdtemp()
    in_mm = tempfile.mkdtemp()
    assert tl.cli.run(['compress', '--config', prototype, '--out', in_m]) == 0
    assert tl.cli.run(['compress', '--config', os.path.join(configdir, 'prototype_mm.toml'), '--out', in_mm]) == 0
    assert not compare_folders(in_m, in_mm)

    return in_m


def test_stdout(capsys):
    sc.heading('Primary table on stdout')

    assert tl.cli.run(['compress', '--setting', '0', '--setting', '40']) == 0
    captured = capsys.readouterr()
    lines = captured.out.splitlines()
    assert lines[0] == 'compression_m,force_N_0mm,force_N_40mm'
    assert len(lines) == 202 # Header plus the sweep from 0 to 0.1 m in 0.5 mm steps

    assert tl.cli.run(['leadscrew', '--mode', 'paper-compat', '-v']) == 0
    captured = capsys.readouterr()
    assert 'paper-compat' in captured.out
    assert 'standard' not in captured.out

    assert tl.cli.run(['size', '--out', tempfile.mkdtemp()]) == 0
    captured = capsys.readouterr()
    assert captured.out == ''

    return lines


def test_exit_codes(capsys):
    sc.heading('Exit codes')

    folder = tempfile.mkdtemp()

    def write(name, text):
        path = os.path.join(folder, name)
        with open(path, 'w') as f:
            f.write(text)
        return path

    assert tl.cli.run([]) == 2
    assert tl.cli.run(['bounce']) == 2
    assert tl.cli.run(['fit']) == 2 # --input is required
    assert tl.cli.run(['compress', '--mode', 'fastest']) == 2
    assert tl.cli.run(['compress', '--config', write('typo.toml', '[leg]\nl_femr = 0.35\n')]) == 2
    assert tl.cli.run(['compress', '--config', os.path.join(folder, 'missing.toml')]) == 2
    assert tl.cli.run(['characterize']) == 2 # No variants configured
    assert tl.cli.run(['fit', '--input', write('bad.csv', 'x_m,F_N\n0,0\n0.01,abc\n')]) == 1
    assert tl.cli.run(['fit', '--input', os.path.join(folder, 'missing.csv')]) == 1
    assert tl.cli.run(['fit', '--input', write('flat.csv', 'x_m,F_N\n0,0\n0,1\n0,2\n')]) == 1

    captured = capsys.readouterr()
    assert captured.out == ''
    assert 'row 2, column "F_N"' in captured.err
    assert 'l_femr' in captured.err

    return captured


def test_json_format():
    sc.heading('JSON and CSV format')

    folder = run_case('fit')
    with open(os.path.join(folder, 'fit.json'), newline='') as f:
        text = f.read()
    assert text.endswith('\n') and '\r' not in text
    report = json.loads(text)
    assert report['r_squared'] >= 0.99
    assert abs(report['a_N_per_mm2'] - report['a']/1e6) < 1e-15

    with open(os.path.join(folder, 'fit.csv'), newline='') as f:
        header = f.readline()
    assert header == 'x_m,F_N,F_fit_N\n'

    return report


def test_writers():
    sc.heading('JSON and CSV writers')

    folder = tempfile.mkdtemp()
    obj = sc.objdict(b=float('nan'), a=[1.5, float('inf')], c=sc.objdict(d=True))
    filepath = tl.write_json(obj, os.path.join(folder, 'obj.json'))
    with open(filepath, newline='') as f:
        text = f.read()
    assert text == '{\n  "b": null,\n  "a": [\n    1.5,\n    null\n  ],\n  "c": {\n    "d": true\n  }\n}\n'

    df = pd.DataFrame({'x_m': [0.1, 1/3]})
    assert tl.write_csv(df) == 'x_m\n0.1\n0.3333333333333333\n'
    filepath = tl.write_json(df, os.path.join(folder, 'df.json'))
    assert sc.loadjson(filepath) == [{'x_m': 0.1}, {'x_m': 1/3}]

    return text


#%% Run as a script
if __name__ == '__main__':

    T = sc.tic()

    save_golden(do_save=do_save)
    test_golden()
    summary = test_outputs()
    in_m    = test_units()
    report  = test_json_format()
    text    = test_writers()

    sc.toc(T)
    print('Done.')
