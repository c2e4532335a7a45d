'''
Miscellaneous functions that do not belong anywhere else: deterministic output
writers and report formatting.
'''

import os
import sys
import numpy as np
import pandas as pd
import sciris as sc


__all__ = ['write_csv', 'write_json', 'format_report', 'colorize', 'use_color']


no_color_env = 'TENSILEG_NO_COLOR'


def write_csv(df, filename=None):
    '''
    Write a dataframe as CSV: header row, no index, "." decimal point, full
    round-trip float precision and LF line endings.

    Args:
        df (dataframe): the table
        filename (str): where to write; if None, return the text instead

    Returns:
        the file path, or the CSV text
    '''
    text = df.to_csv(index=False, lineterminator='\n', float_format=_float_repr)
    if filename is None:
        return text
    filepath = sc.makefilepath(filename=filename)
    with open(filepath, 'w', encoding='utf-8', newline='\n') as f:
        f.write(text)
    return filepath


def _float_repr(value):
    return repr(float(value))


def _sanitize(obj):
    ''' Convert to plain JSON types; non-finite floats become null '''
    obj = sc.jsonify(obj)
    if isinstance(obj, dict):
        return {str(k): _sanitize(v) for k,v in obj.items()}
    elif isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    elif isinstance(obj, float) and not np.isfinite(obj):
        return None
    return obj


def write_json(obj, filename):
    '''
    Write an object (dicts, lists, numbers, arrays, dataframes) as deterministic
    JSON: keys in insertion order, indent of 2, non-finite numbers as null and a
    trailing newline.
    '''
    if isinstance(obj, pd.DataFrame):
        obj = obj.to_dict(orient='records')
    filepath = sc.makefilepath(filename=filename)
    sc.savejson(filename=filepath, obj=_sanitize(obj), indent=2, allow_nan=False)
    with open(filepath, 'a', encoding='utf-8', newline='\n') as f:
        f.write('\n')
    return filepath


def use_color(stream=None):
    ''' Colors only go to terminals, and never when TENSILEG_NO_COLOR is set '''
    stream = sys.stdout if stream is None else stream
    if os.environ.get(no_color_env):
        return False
    return hasattr(stream, 'isatty') and stream.isatty()


def colorize(text, color='cyan', stream=None):
    ''' Wrap text in ANSI colors if appropriate for the stream '''
    if not use_color(stream):
        return text
    return sc.colorize(color, text, output=True)


def format_report(report, title=None, stream=None, indent=0):
    '''
    Human-readable key/value rendering of a nested report. Numbers use their
    round-trip representation; booleans are shown as yes/no.

    **Example**::

        print(tl.format_report(tl.leadscrew_report(spec), title='Lead screw'))
    '''
    lines = []
    if title is not None:
        lines.append(colorize(title, 'bold', stream=stream))
    pad = ' '*indent
    for key,value in report.items():
        if isinstance(value, dict):
            lines.append(f'{pad}{key}:')
            lines.append(format_report(value, stream=stream, indent=indent+2))
        elif isinstance(value, pd.DataFrame):
            lines.append(f'{pad}{key}:')
            table = value.to_string(index=False, float_format=_float_repr)
            lines.extend(f'{pad}  {line}' for line in table.splitlines())
        else:
            if isinstance(value, (bool, np.bool_)):
                text = 'yes' if value else 'no'
                text = colorize(text, 'green' if value else 'red', stream=stream)
            elif isinstance(value, (float, np.floating)):
                text = _float_repr(value)
            else:
                text = str(value)
            lines.append(f'{pad}{key}: {text}')
    return '\n'.join(lines)
