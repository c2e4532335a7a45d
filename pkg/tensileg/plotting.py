'''
Plotting functions for stiffness sweeps, compression sweeps, drops, fits and
rotation tests, plus gnuplot scripts for the data files written by the CLI.
'''

import numpy as np
import pylab as pl
import sciris as sc
from . import defaults as tld


__all__ = ['plot_stiffness', 'plot_compression', 'plot_drop', 'plot_fit', 'plot_rotation', 'write_gnuplot']


#%% Plotting helper functions

def handle_args(fig_args=None, plot_args=None, scatter_args=None, axis_args=None, legend_args=None):
    ''' Handle input arguments -- merge user input with defaults '''
    args = sc.objdict()
    args.fig     = sc.mergedicts({'figsize': (10, 7)}, fig_args)
    args.plot    = sc.mergedicts({'lw': 2, 'alpha': 0.9}, plot_args)
    args.scatter = sc.mergedicts({'s': 12, 'alpha': 0.6}, scatter_args)
    args.axis    = sc.mergedicts({'left': 0.12, 'bottom': 0.12, 'right': 0.95, 'top': 0.92}, axis_args)
    args.legend  = sc.mergedicts({'loc': 'best', 'frameon': False}, legend_args)
    return args


def create_fig(args, title=None, xlabel=None, ylabel=None, font_size=14):
    ''' Create a figure with a single axis '''
    pl.rcParams['font.size'] = font_size
    fig = pl.figure(**args.fig)
    pl.subplots_adjust(**args.axis)
    ax = pl.subplot(111)
    if title:
        ax.set_title(title)
    if xlabel:
        ax.set_xlabel(xlabel)
    if ylabel:
        ax.set_ylabel(ylabel)
    ax.grid(True, alpha=0.3)
    return fig, ax


def tidy_up(fig, ax, args, do_save, fig_path, do_show, default_name):
    ''' Handle the legend, saving, figure showing, and what value to return '''
    if ax.get_legend_handles_labels()[0]:
        ax.legend(**args.legend)
    if do_save:
        if fig_path is None:
            fig_path = default_name
        fig_path = sc.makefilepath(fig_path)
        pl.savefig(fig_path)
    if do_show:
        pl.show()
    else:
        pl.close(fig)
    return fig


#%% Core plotting functions

def plot_stiffness(sweep, do_save=None, fig_path=None, do_show=False, fig_args=None, plot_args=None, axis_args=None, legend_args=None):
    '''
    Rotational stiffness against joint rotation, one line per pretension force.

    Args:
        sweep (dataframe): output of pretension_sweep(), with a theta_rad column
    '''
    args = handle_args(fig_args=fig_args, plot_args=plot_args, axis_args=axis_args, legend_args=legend_args)
    fig, ax = create_fig(args, title='Rotational stiffness', xlabel='Rotation θ (rad)', ylabel='k_θ (N·m/rad)')
    columns = [col for col in sweep.columns if col != 'theta_rad']
    colors = sc.gridcolors(len(columns))
    for col,color in zip(columns, colors):
        ax.plot(sweep['theta_rad'], sweep[col], c=color, label=col, **args.plot)
    return tidy_up(fig, ax, args, do_save, fig_path, do_show, 'stiffness.png')


def plot_compression(sweeps, reference=None, do_save=None, fig_path=None, do_show=False, fig_args=None, plot_args=None, scatter_args=None, axis_args=None, legend_args=None):
    '''
    Reaction force against compression for each setting.

    Args:
        sweeps (odict): dataframes by setting label, as returned by multi_compress()
        reference (list): optional measured forces at the end of the sweep, one per setting

    **Example**::

        sweeps = tl.multi_compress(tl.LegModel(), tl.default_settings)
        tl.plot_compression(sweeps, reference=[11.71, 15.00, 21.97])
    '''
    args = handle_args(fig_args=fig_args, plot_args=plot_args, scatter_args=scatter_args, axis_args=axis_args, legend_args=legend_args)
    fig, ax = create_fig(args, title='Quasi-static compression', xlabel='Compression (mm)', ylabel='Force (N)')
    colors = tld.get_setting_colors(sweeps.keys())
    for i,(label,df) in enumerate(sweeps.items()):
        ax.plot(df['compression_m']*1000, df['force_N'], c=colors[i], label=label, **args.plot)
        if reference is not None and i < len(reference):
            ax.scatter([df['compression_m'].iloc[-1]*1000], [reference[i]], c=[colors[i]], marker='s', **args.scatter)
    return tidy_up(fig, ax, args, do_save, fig_path, do_show, 'compression.png')


def plot_drop(traces, do_save=None, fig_path=None, do_show=False, fig_args=None, plot_args=None, axis_args=None, legend_args=None):
    ''' Pelvis acceleration after release, one line per setting '''
    args = handle_args(fig_args=fig_args, plot_args=plot_args, axis_args=axis_args, legend_args=legend_args)
    fig, ax = create_fig(args, title='Drop test', xlabel='Time (s)', ylabel='Pelvis acceleration (m/s²)')
    colors = tld.get_setting_colors(traces.keys())
    for i,(label,trace) in enumerate(traces.items()):
        ax.plot(trace.time, trace.pelvis_ay, c=colors[i], label=label, **args.plot)
    return tidy_up(fig, ax, args, do_save, fig_path, do_show, 'drop.png')


def plot_fit(x, y, fit, do_save=None, fig_path=None, do_show=False, fig_args=None, plot_args=None, scatter_args=None, axis_args=None, legend_args=None):
    ''' Measured spring force with its unbiased quadratic fit '''
    c = tld.get_colors()
    args = handle_args(fig_args=fig_args, plot_args=plot_args, scatter_args=scatter_args, axis_args=axis_args, legend_args=legend_args)
    fig, ax = create_fig(args, title='Spring force', xlabel='Extension (m)', ylabel='Force (N)')
    ax.scatter(x, y, c=c.raw, label='Data', **args.scatter)
    xx = np.linspace(0, np.max(x), 200)
    label = f'{fit.a:0.4g}·x² + {fit.b:0.4g}·x (r² = {fit.r_squared:0.4f})'
    ax.plot(xx, fit.predict(xx), c=c.fit, label=label, **args.plot)
    return tidy_up(fig, ax, args, do_save, fig_path, do_show, 'fit.png')


def plot_rotation(curves, do_save=None, fig_path=None, do_show=False, fig_args=None, plot_args=None, axis_args=None, legend_args=None):
    '''
    Torque against joint angle for each tendon variant.

    Args:
        curves (dict): dataframes with phi_deg and M_Nm columns, by variant label
    '''
    args = handle_args(fig_args=fig_args, plot_args=plot_args, axis_args=axis_args, legend_args=legend_args)
    fig, ax = create_fig(args, title='Rotation test', xlabel='Joint angle φ (°)', ylabel='Torque (N·m)')
    colors = sc.gridcolors(len(curves))
    for color,(label,df) in zip(colors, curves.items()):
        ax.plot(df['phi_deg'], df['M_Nm'], c=color, label=label, **args.plot)
    ax.invert_xaxis() # The test runs from extended to bent
    return tidy_up(fig, ax, args, do_save, fig_path, do_show, 'rotation.png')


#%% Gnuplot scripts

def write_gnuplot(filename, datafiles, x, y, title=None, xlabel=None, ylabel=None, labels=None):
    '''
    Write a minimal gnuplot script that plots column y against column x of one
    or more CSV files.

    Args:
        filename (str): the script to write (e.g. "compression.gp")
        datafiles (list): CSV files, given relative to the script's folder
        x (str): name of the x column
        y (str or list): name of the y column, or one per data file
        title (str): plot title
        xlabel (str): axis label (default: x)
        ylabel (str): axis label (default: y)
        labels (list): legend entries (default: the file names)

    Returns:
        filepath (str): where the script was written
    '''
    datafiles = sc.tolist(datafiles)
    ys = sc.tolist(y)
    if len(ys) == 1:
        ys = ys*len(datafiles)
    if len(ys) != len(datafiles):
        errormsg = f'Need one y column or one per data file, not {len(ys)} for {len(datafiles)} files'
        raise ValueError(errormsg)
    labels = datafiles if labels is None else sc.tolist(labels)
    lines = [
        "set datafile separator ','",
        'set key autotitle columnhead',
        f'set title "{title}"' if title else 'unset title',
        f'set xlabel "{xlabel if xlabel else x}"',
        f'set ylabel "{ylabel if ylabel else ys[0]}"',
        'set grid',
    ]
    plots = [f'"{datafile}" using "{x}":"{col}" with lines title "{label}"' for datafile,col,label in zip(datafiles, ys, labels)]
    lines.append('plot ' + ', \\\n     '.join(plots))
    filepath = sc.makefilepath(filename=filename)
    with open(filepath, 'w', encoding='utf-8', newline='\n') as f:
        f.write('\n'.join(lines) + '\n')
    return filepath
