'''
Joint-characterization data reduction: tensile-machine (h, F) records become
(φ, M) rotation curves and compression stiffness summaries, which are then used
to compare tendon variants.
'''

import re
import numpy as np
import pandas as pd
import sciris as sc
import statsmodels.api as sm
from . import defaults as tld
from . import base as tlb
from . import leg as tlleg
from . import analysis as tla


__all__ = ['VariantLabel', 'RotationTestRecord', 'CompressionTestRecord', 'reduce_rotation_test',
           'linear_compression_stiffness', 'synthesize_rotation_test', 'compare_variants', 'load_rotation_test',
           'load_compression_test', 'rank_key']


class VariantLabel(sc.prettyobj):
    '''
    A tendon variant: cross-section (8 or 12 mm² for the prototype) and
    pretension as a percentage (70, 80 or 90%).

    **Example**::

        tl.VariantLabel.parse('90% 12mm2').cross_section_mm2 # 12
    '''

    pattern = re.compile(r'^\s*(?P<pct>[0-9.]+)\s*%\s*(?P<cs>[0-9.]+)\s*mm(2|²)\s*$')

    def __init__(self, cross_section_mm2, pretension_pct):
        tlb.check_positive(cross_section_mm2, 'cross_section_mm2')
        tlb.check_positive(pretension_pct, 'pretension_pct')
        self.cross_section_mm2 = cross_section_mm2
        self.pretension_pct = pretension_pct
        return

    def __str__(self):
        return f'{self.pretension_pct:g}% {self.cross_section_mm2:g}mm2'

    def __eq__(self, other):
        return str(self) == str(other)

    def __hash__(self):
        return hash(str(self))

    @classmethod
    def parse(cls, label):
        ''' Parse a label such as "80% 12mm2" '''
        if isinstance(label, cls):
            return label
        match = cls.pattern.match(str(label))
        if not match:
            errormsg = f'Variant label "{label}" not understood; expected e.g. "90% 12mm2"'
            raise ValueError(errormsg)
        return cls(float(match['cs']), float(match['pct']))


class RotationTestRecord(sc.prettyobj):
    '''
    A rotation test: the rig closes the arms, decreasing h, while the load cell
    records F.

    Args:
        h (array): distance between the arm tips, m, decreasing
        F (array): load-cell force, N
        variant (VariantLabel or str): the tendon variant
        l1 (float): arm length, m
    '''

    def __init__(self, h, F, variant, l1=None):
        self.l1 = tld.rig_l1 if l1 is None else float(l1)
        tlb.check_positive(self.l1, 'l1')
        h = np.array(h, dtype=float)
        F = np.array(F, dtype=float)
        if h.shape != F.shape or h.ndim != 1 or not len(h):
            errormsg = f'h and F must be non-empty 1D arrays of equal length, not shapes {h.shape} and {F.shape}'
            raise tlb.DomainError(errormsg)
        for i in range(len(h)):
            if not (0 <= h[i] <= 2*self.l1) or not np.isfinite(F[i]):
                errormsg = f'Row {i+1} of the rotation test is invalid: h={h[i]} m must lie in [0, {2*self.l1}] m and F={F[i]} N must be finite'
                raise tlb.DomainError(errormsg)
        if np.any(np.diff(h) > 0):
            i = np.nonzero(np.diff(h) > 0)[0][0] + 2
            errormsg = f'Rotation test samples must be ordered by decreasing h; row {i} increases'
            raise tlb.DomainError(errormsg)
        self.h = h
        self.F = F
        self.variant = VariantLabel.parse(variant)
        return


class CompressionTestRecord(sc.prettyobj):
    '''
    A coaxial compression test of the joint.

    Args:
        x (array): compression displacement, m, non-decreasing
        F (array): force, N
        variant (VariantLabel or str): the tendon variant
    '''

    def __init__(self, x, F, variant):
        x = np.array(x, dtype=float)
        F = np.array(F, dtype=float)
        if x.shape != F.shape or x.ndim != 1:
            errormsg = f'x and F must be 1D arrays of equal length, not shapes {x.shape} and {F.shape}'
            raise tlb.DomainError(errormsg)
        tlb.check_finite(x, 'x')
        tlb.check_finite(F, 'F')
        if np.any(np.diff(x) < 0):
            i = np.nonzero(np.diff(x) < 0)[0][0] + 2
            errormsg = f'Compression displacement must be non-decreasing; row {i} decreases'
            raise tlb.DomainError(errormsg)
        self.x = x
        self.F = F
        self.variant = VariantLabel.parse(variant)
        return


def reduce_rotation_test(rec):
    '''
    Joint angle and torque of a rotation test. The force of the first sample is
    the baseline (the load cell is zeroed at the start) and is subtracted;
    force magnitudes are used since the sign convention of the machine is
    not fixed.

    Returns:
        df (dataframe): columns phi_deg and M_Nm, sorted by decreasing φ
    '''
    phi = tlleg.phi_from_h(rec.h, rec.l1)
    force = np.abs(rec.F - rec.F[0])
    M = tlleg.rig_torque(force, rec.l1, phi)
    df = pd.DataFrame({'phi_deg': np.rad2deg(np.atleast_1d(phi)), 'M_Nm': np.atleast_1d(M)})
    df = df.sort_values('phi_deg', ascending=False, kind='stable').reset_index(drop=True)
    return df


def synthesize_rotation_test(torque_law, phis, variant, l1=None):
    '''
    Forward-generate a rotation test from a torque law M(φ), e.g. to check the
    reduction. Angles must lie in [0, π) and are visited in decreasing order.

    Args:
        torque_law (func): M in N·m as a function of φ in rad, with M(phis[0]) = 0
        phis (array): joint angles, rad
        variant (str): the tendon variant
        l1 (float): arm length, m
    '''
    l1 = tld.rig_l1 if l1 is None else l1
    phis = np.sort(sc.toarray(phis, dtype=float))[::-1]
    if np.any(phis >= np.pi):
        errormsg = 'The torque is indeterminate from the force at φ = π; use angles below π'
        raise tlb.DomainError(errormsg)
    h = tlleg.h_from_phi(phis, l1)
    M = np.array([torque_law(phi) for phi in phis], dtype=float)
    F = M/(l1*np.sin((np.pi - phis)/2))
    return RotationTestRecord(h=h, F=F, variant=variant, l1=l1)


def linear_compression_stiffness(rec):
    '''
    Ordinary least-squares line through a compression test (with intercept).

    Returns:
        result (objdict): slope in N/m, intercept in N and r_squared
    '''
    if len(rec.x) < 2:
        errormsg = f'A compression stiffness needs at least 2 samples, not {len(rec.x)}'
        raise tlb.RankError(errormsg)
    if np.ptp(rec.x) == 0:
        errormsg = 'All compression displacements are equal, so the slope is undefined'
        raise tlb.RankError(errormsg)
    X = sm.add_constant(rec.x, has_constant='add')
    results = sm.OLS(rec.F, X).fit()
    intercept, slope = results.params
    result = sc.objdict(slope=float(slope), intercept=float(intercept), r_squared=tla.r_squared(rec.F, results.fittedvalues))
    return result


def rank_key(entry):
    ''' Ascending peak torque, then descending slope, then label '''
    return (entry['peak_torque_Nm'], -entry['compression_slope_Npm'], entry['variant'])


def compare_variants(records, preferred=None):
    '''
    Rank tendon variants by low resistance to rotation and high resistance to
    coaxial loading. Both metrics are reported together with a Pareto flag,
    without weighting them into a single score.

    Args:
        records (list): RotationTestRecord and CompressionTestRecord objects, at least one of each per variant
        preferred (str): variant to flag if it dominates all others (default "90% 12mm2")

    Returns:
        report (objdict): a ranked table (dataframe) and the dominance verdicts
    '''
    preferred = str(VariantLabel.parse(tld.preferred_variant if preferred is None else preferred))
    rotations = sc.objdict()
    compressions = sc.objdict()
    for rec in records:
        label = str(rec.variant)
        if isinstance(rec, RotationTestRecord):
            rotations.setdefault(label, []).append(rec)
        elif isinstance(rec, CompressionTestRecord):
            compressions.setdefault(label, []).append(rec)
        else:
            errormsg = f'Records must be rotation or compression test records, not {type(rec)}'
            raise TypeError(errormsg)

    labels = sorted(set(rotations.keys()) | set(compressions.keys()))
    if not labels:
        errormsg = 'No records to compare'
        raise ValueError(errormsg)
    entries = []
    for label in labels:
        if label not in rotations:
            errormsg = f'Variant "{label}" has no rotation test'
            raise tlb.IncompleteVariantError(errormsg)
        if label not in compressions:
            errormsg = f'Variant "{label}" has no compression test'
            raise tlb.IncompleteVariantError(errormsg)
        peak = max(reduce_rotation_test(rec)['M_Nm'].abs().max() for rec in rotations[label])
        fits = [linear_compression_stiffness(rec) for rec in compressions[label]]
        entries.append(dict(
            variant = label,
            peak_torque_Nm = float(peak),
            compression_slope_Npm = float(np.mean([fit.slope for fit in fits])),
            compression_r_squared = float(np.mean([fit.r_squared for fit in fits])),
        ))

    # Pareto optimality: no other variant is at least as good on both metrics and better on one
    for entry in entries:
        entry['pareto_optimal'] = not any(
            other is not entry
            and other['peak_torque_Nm'] <= entry['peak_torque_Nm']
            and other['compression_slope_Npm'] >= entry['compression_slope_Npm']
            and (other['peak_torque_Nm'] < entry['peak_torque_Nm'] or other['compression_slope_Npm'] > entry['compression_slope_Npm'])
            for other in entries)

    entries = sorted(entries, key=rank_key)
    for r,entry in enumerate(entries):
        entry['rank'] = r + 1
    table = pd.DataFrame(entries, columns=['rank', 'variant', 'peak_torque_Nm', 'compression_slope_Npm', 'compression_r_squared', 'pareto_optimal'])

    # A variant dominates if it is at least as good as every other on both metrics
    dominant = [e['variant'] for e in entries if all(e['peak_torque_Nm'] <= o['peak_torque_Nm'] and e['compression_slope_Npm'] >= o['compression_slope_Npm'] for o in entries)]
    report = sc.objdict()
    report.table = table
    report.dominant = dominant[0] if dominant else None
    report.preferred = preferred
    report.preferred_dominates = preferred in dominant
    return report


def load_rotation_test(path, variant, l1=None):
    ''' Load a rotation test exported with columns h_m and F_N '''
    df = tla.ingest_csv(path, ['h_m', 'F_N'])
    return RotationTestRecord(df['h_m'].values, df['F_N'].values, variant=variant, l1=l1)


def load_compression_test(path, variant):
    ''' Load a compression test exported with columns x_m and F_N '''
    df = tla.ingest_csv(path, ['x_m', 'F_N'])
    return CompressionTestRecord(df['x_m'].values, df['F_N'].values, variant=variant)
