'''
The tensileg command. Each subcommand reads a config, computes, and either
prints its primary table to stdout or, with --out, writes CSV/JSON files and
gnuplot scripts. Diagnostics, including library progress messages, go to stderr.

Exit status: 0 on success, 2 on usage or config errors, 1 on computation errors.
'''

import os
import re
import sys
import argparse
import contextlib
import numpy as np
import pandas as pd
import sciris as sc
from . import version as tlver
from . import defaults as tld
from . import base as tlb
from . import parameters as tlpar
from . import springs as tls
from . import rotary as tlr
from . import leadscrew as tlls
from . import leg as tlleg
from . import statics as tlst
from . import analysis as tla
from . import rigdata as tlrig
from . import run as tlrun
from . import misc as tlm
from . import plotting as tlplt


__all__ = ['run', 'main', 'make_parser', 'commands']


commands = sc.odict(
    stiffness    = 'rotary stiffness sweeps of linear and quadratic springs over pretension',
    leadscrew    = 'lead-screw dimensioning report',
    size         = 'winch actuation torque and servo check',
    compress     = 'quasi-static compression sweep per stiffness setting',
    drop         = 'drop-test simulation per stiffness setting',
    fit          = 'unbiased quadratic fit of a force-extension CSV',
    filter       = 'smooth and differentiate a tracked drop recording CSV',
    characterize = 'reduce and compare joint characterization tests',
)

mode_choices = ['standard', 'paper-compat', 'both']


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    ''' Raise instead of exiting, so run() can return the status '''

    def error(self, message):
        raise UsageError(f'{self.prog}: error: {message}')


def make_parser():
    ''' Build the argument parser '''
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', default=None, help='TOML config file (default: built-in prototype values)')
    common.add_argument('--out', default=None, help='output folder; if omitted, the primary table is printed to stdout')
    common.add_argument('--units', choices=tlpar.unit_choices, default=None, help='unit of lengths in the config, overriding units.input')
    common.add_argument('--setting', type=float, action='append', default=None, metavar='MM', help='slider displacement in mm (repeatable)')
    common.add_argument('--mode', choices=mode_choices, default='both', help='lead-screw formula mode')
    common.add_argument('--verbose', '-v', action='count', default=None, help='print progress to stderr (repeat for more)')

    parser = _Parser(prog='tensileg', description='Variable-stiffness tensegrity leg toolkit')
    parser.add_argument('--version', action='version', version=f'%(prog)s {tlver.__version__}')
    subparsers = parser.add_subparsers(dest='command', parser_class=_Parser)
    for name,helptext in commands.items():
        sub = subparsers.add_parser(name, parents=[common], help=helptext, description=helptext)
        if name in ['fit', 'filter']:
            sub.add_argument('--input', required=True, help='CSV file to process')
    return parser


#%% Helpers

class Output(sc.prettyobj):
    ''' Collects the written files; with no folder, nothing is written '''

    def __init__(self, folder):
        self.folder = folder
        self.files = []
        return

    @property
    def active(self):
        return self.folder is not None

    def path(self, filename):
        return os.path.join(self.folder, filename)

    def csv(self, df, filename):
        if self.active:
            self.files.append(tlm.write_csv(df, self.path(filename)))
        return

    def json(self, obj, filename):
        if self.active:
            self.files.append(tlm.write_json(obj, self.path(filename)))
        return

    def gnuplot(self, filename, datafiles, x, y, **kwargs):
        if self.active:
            self.files.append(tlplt.write_gnuplot(self.path(filename), datafiles, x, y, **kwargs))
        return


def _settings(args, default):
    ''' Settings from --setting (in mm) or the config (in m) '''
    if args.setting:
        return [mm/1000 for mm in args.setting]
    return default


def _slug(label):
    return re.sub(r'[^0-9A-Za-z]+', '_', str(label)).strip('_')


#%% Subcommands

def cmd_stiffness(args, config, out, verbose):
    p = config.stiffness
    if p.n_theta < 2:
        errormsg = f'Config key "stiffness.n_theta" must be at least 2, not {p.n_theta}'
        raise tlb.ConfigError(errormsg)
    thetas = np.linspace(-p.theta_max, p.theta_max, int(p.n_theta))
    linear = tls.Parallel(tls.Linear(p.k_s), tls.Linear(p.k_c))
    quadratic = tls.Quadratic(p.k_l, p.k_q)
    sc.printv(f'Sweeping {len(thetas)} rotations for pretensions {p.pretension_forces} N', 1, verbose)
    lin = tlr.pretension_sweep(linear, p.r_p, p.pretension_forces, thetas)
    quad = tlr.pretension_sweep(quadratic, p.r_p, p.pretension_forces, thetas)

    # Closed-form single-side stiffness of the quadratic spring
    single = {'theta_rad': thetas}
    rows = []
    for F0 in p.pretension_forces:
        x0_lin = tls.solve_pretension_displacement(linear, F0)
        x0_quad = tls.solve_pretension_displacement(quadratic, F0)
        single[f'k_theta_F0_{F0:g}N'] = tlr.rotational_stiffness_quadratic(p.k_l, p.k_q, x0_quad, p.r_p, thetas)
        rows.append(dict(
            F0_N = F0,
            x0_linear_m = x0_lin,
            k_linear_single_Nm_per_rad = tlr.rotational_stiffness_linear(p.k_s, p.k_c, p.r_p),
            k_linear_antagonistic_Nm_per_rad = tlr.tangent_stiffness(tlr.AntagonisticJoint(p.r_p, linear, x0=x0_lin), 0.0),
            x0_quadratic_m = x0_quad,
            k_quadratic_single_Nm_per_rad = tlr.rotational_stiffness_quadratic(p.k_l, p.k_q, x0_quad, p.r_p, 0.0),
            k_quadratic_antagonistic_Nm_per_rad = tlr.tangent_stiffness(tlr.AntagonisticJoint(p.r_p, quadratic, x0=x0_quad), 0.0),
        ))
    summary = pd.DataFrame(rows)

    out.csv(lin, 'stiffness_linear.csv')
    out.csv(quad, 'stiffness_quadratic.csv')
    out.csv(pd.DataFrame(single), 'stiffness_quadratic_single.csv')
    out.csv(summary, 'stiffness_summary.csv')
    columns = [col for col in lin.columns if col != 'theta_rad']
    for name in ['linear', 'quadratic', 'quadratic_single']:
        out.gnuplot(f'stiffness_{name}.gp', [f'stiffness_{name}.csv']*len(columns), 'theta_rad', columns, labels=columns,
                    title=f'Rotational stiffness ({name.replace("_", " ")})', xlabel='theta (rad)', ylabel='k_theta (N m/rad)')
    return tlm.write_csv(summary)


def cmd_leadscrew(args, config, out, verbose):
    p = config.leadscrew
    F_axial = p.F_axial if p.per_spring_force is None else tlls.axial_force_from_springs(p.per_spring_force, p.n_springs)
    spec = tlls.LeadScrewSpec(D_m=p.D_m, L=p.L, mu=p.mu, F_axial=F_axial, motor_torque_available=p.motor_torque_available)
    modes = tlls.formula_modes if args.mode == 'both' else [args.mode]
    report = tlls.leadscrew_report(spec, modes=modes)
    out.json(report, 'leadscrew.json')
    return tlm.format_report(report, title='Lead screw')


def cmd_size(args, config, out, verbose):
    model = tlleg.LegModel(**config.leg)
    a = config.actuation
    required = tlleg.required_actuation_torque(model, a.payload_mass, safety_factor=a.safety_factor)
    report = sc.objdict()
    report.payload_mass_kg = a.payload_mass
    report.safety_factor = a.safety_factor
    report.winch_reduction = tlleg.winch_reduction(model)
    report.required_torque_Nm = required
    report.servo = tlleg.servo_feasibility(required, a.servo_torque)
    out.json(report, 'size.json')
    return tlm.format_report(report, title='Actuation')


def cmd_compress(args, config, out, verbose):
    p = config.compression
    model = tlleg.LegModel(**config.leg)
    settings = _settings(args, p.settings)
    sweeps = tlrun.multi_compress(model, settings, max_compression=p.max_compression, step=p.step,
                                  parallel=config.run.parallel, verbose=verbose)
    table = pd.DataFrame({'compression_m': sweeps[0]['compression_m']})
    summary = {'force_at_max_N': {}}
    for label,df in sweeps.items():
        out.csv(df, f'compression_{label}.csv')
        table[f'force_N_{label}'] = df['force_N'].values
        summary['force_at_max_N'][label] = float(df['force_N'].iloc[-1])
    forces = list(summary['force_at_max_N'].values())
    summary['force_difference_pct'] = tlst.force_difference_pct(forces[-1], forces[0]) if len(forces) > 1 else None
    out.json(summary, 'compression_summary.json')
    out.gnuplot('compression.gp', [f'compression_{label}.csv' for label in sweeps.keys()], 'compression_m', 'force_N',
                labels=list(sweeps.keys()), title='Quasi-static compression', xlabel='compression (m)', ylabel='force (N)')
    return tlm.write_csv(table)


def cmd_drop(args, config, out, verbose):
    p = config.drop
    model = tlleg.LegModel(**config.leg)
    settings = _settings(args, p.settings)
    scen_args = dict(drop_height=p.drop_height, added_mass=p.added_mass, integrator_dt=p.integrator_dt, sim_duration=p.sim_duration)
    traces = tlrun.multi_drop(model, settings, scen_args=scen_args, parallel=config.run.parallel, verbose=verbose)
    summary = tlrun.summarize_drops(traces)
    for label,trace in traces.items():
        df = pd.DataFrame({'t_s': trace.time, 'y_m': trace.pelvis_y, 'vy_mps': trace.pelvis_vy, 'ay_mps2': trace.pelvis_ay})
        out.csv(df, f'drop_{label}.csv')
        out.json(summary['settings'][label], f'drop_{label}.json')
    out.json(summary, 'drop_summary.json')
    out.gnuplot('drop.gp', [f'drop_{label}.csv' for label in traces.keys()], 't_s', 'ay_mps2',
                labels=list(traces.keys()), title='Drop test', xlabel='time (s)', ylabel='pelvis acceleration (m/s^2)')
    table = pd.DataFrame([dict(setting=label, **record) for label,record in summary['settings'].items()])
    return tlm.write_csv(table)


def cmd_fit(args, config, out, verbose):
    df = tla.ingest_csv(args.input, ['x_m', 'F_N'], verbose=verbose)
    fit = tla.fit_unbiased_quadratic(df['x_m'].values, df['F_N'].values)
    report = sc.objdict(fit.to_dict())
    report.n = fit.n
    report.a_N_per_mm2 = fit.a/1e6
    report.b_N_per_mm = fit.b/1e3
    data = pd.DataFrame({'x_m': df['x_m'], 'F_N': df['F_N'], 'F_fit_N': fit.predict(df['x_m'].values)})
    out.csv(data, 'fit.csv')
    out.json(report, 'fit.json')
    out.gnuplot('fit.gp', ['fit.csv', 'fit.csv'], 'x_m', ['F_N', 'F_fit_N'], labels=['data', 'fit'],
                title='Unbiased quadratic fit', xlabel='extension (m)', ylabel='force (N)')
    return tlm.format_report(report, title='Quadratic fit')


def cmd_filter(args, config, out, verbose):
    series = tla.ingest_csv(args.input, ['t_s', 'y_m'], kind='series', verbose=verbose)
    df = tla.process_drop_recording(series, config.analysis)
    out.csv(df, 'filtered.csv')
    out.json(sc.mergedicts(config.analysis, {'n': len(series), 'dt_s': series.dt, 'resampled': series.metadata['resampled']}), 'filter.json')
    out.gnuplot('filter.gp', ['filtered.csv', 'filtered.csv'], 't_s', ['ay_mps2', 'ay_smooth_mps2'], labels=['raw', 'filtered'],
                title='Drop recording', xlabel='time (s)', ylabel='acceleration (m/s^2)')
    return tlm.write_csv(df)


def cmd_characterize(args, config, out, verbose):
    if not config.variants:
        errormsg = f'Config key "characterize.variants" is required for characterize (in {config.source})'
        raise tlb.ConfigError(errormsg)
    records = []
    curves = sc.odict()
    for v,variant in enumerate(config.variants):
        if 'label' in variant:
            label = tlrig.VariantLabel.parse(variant.label)
        elif 'cross_section_mm2' in variant and 'pretension_pct' in variant:
            label = tlrig.VariantLabel(variant.cross_section_mm2, variant.pretension_pct)
        else:
            errormsg = f'Config key "characterize.variants[{v}]" needs a label or both cross_section_mm2 and pretension_pct'
            raise tlb.ConfigError(errormsg)
        for r,path in enumerate(sc.tolist(variant.rotation)):
            rec = tlrig.load_rotation_test(config.resolve(path), label, l1=config.rig.l1)
            records.append(rec)
            key = f'{_slug(label)}_{r}' if len(sc.tolist(variant.rotation)) > 1 else _slug(label)
            curves[key] = tlrig.reduce_rotation_test(rec)
        for path in sc.tolist(variant.compression):
            records.append(tlrig.load_compression_test(config.resolve(path), label))
        sc.printv(f'Loaded variant {label}', 1, verbose)
    report = tlrig.compare_variants(records, preferred=config.rig.preferred)
    for key,df in curves.items():
        out.csv(df, f'rotation_{key}.csv')
    out.csv(report.table, 'characterize.csv')
    out.json(sc.objdict(table=report.table.to_dict(orient='records'), dominant=report.dominant,
                        preferred=report.preferred, preferred_dominates=report.preferred_dominates), 'characterize.json')
    out.gnuplot('rotation.gp', [f'rotation_{key}.csv' for key in curves.keys()], 'phi_deg', 'M_Nm', labels=list(curves.keys()),
                title='Rotation test', xlabel='joint angle (deg)', ylabel='torque (N m)')
    return tlm.format_report(report, title='Tendon variants')


#%% Entry points

def run(argv=None):
    '''
    Run the command line and return the exit status.

    **Example**::

        tl.cli.run(['leadscrew', '--mode', 'paper-compat'])
    '''
    argv = sys.argv[1:] if argv is None else list(argv)
    stdout, stderr = sys.stdout, sys.stderr
    parser = make_parser()
    if not argv:
        parser.print_usage(file=stderr)
        return 2
    try:
        args = parser.parse_args(argv)
    except UsageError as E:
        parser.print_usage(file=stderr)
        print(E, file=stderr)
        return 2
    except SystemExit as E: # --help and --version
        return E.code if isinstance(E.code, int) else 0
    if args.command is None:
        parser.print_usage(file=stderr)
        return 2

    command = args.command
    try:
        config = tlpar.load_config(args.config, units=args.units)
        verbose = args.verbose if args.verbose is not None else config.run.verbose
        out = Output(args.out)
        with contextlib.redirect_stdout(stderr): # Library output is diagnostic
            T = sc.tic()
            primary = globals()[f'cmd_{command}'](args, config, out, verbose)
            for filepath in out.files:
                sc.printv(f'Wrote {filepath}', 1, verbose)
            sc.printv(f'{command} finished after {sc.toc(T, output=True):0.2f} s', 1, verbose)
    except tlb.ConfigError as E:
        print(tlm.colorize(f'tensileg {command}: config error: {E}', 'red', stream=stderr), file=stderr)
        return 2
    except (tlb.TensilegError, ValueError, ArithmeticError, RuntimeError, np.linalg.LinAlgError) as E:
        print(tlm.colorize(f'tensileg {command}: error: {E}', 'red', stream=stderr), file=stderr)
        return 1

    if not out.active:
        stdout.write(primary if primary.endswith('\n') else primary + '\n')
    return 0


def main():
    ''' Console-script entry point '''
    sys.exit(run())
