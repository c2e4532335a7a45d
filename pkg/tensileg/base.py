'''
Base classes for Tensileg: the parameters object and the error hierarchy.
'''

import numpy as np
import sciris as sc

# Specify all externally visible classes this file defines
__all__ = ['ParsObj', 'TensilegError', 'DomainError', 'GeometryError', 'ConvergenceError', 'RankError',
           'UnsupportedConfigurationError', 'ConfigError', 'IngestionError', 'EventMissingError',
           'IncompleteVariantError', 'check_finite', 'check_nonnegative', 'check_positive']


#%% Errors

class TensilegError(Exception):
    ''' Base class for all errors raised by Tensileg '''
    pass


class DomainError(TensilegError, ValueError):
    ''' An input is non-finite or outside the range an operation is defined on '''
    pass


class GeometryError(TensilegError, ValueError):
    ''' A pose or mechanism geometry is infeasible '''
    pass


class ConvergenceError(TensilegError, RuntimeError):
    ''' A numerical solve failed; the message reports the residual '''
    pass


class RankError(TensilegError, np.linalg.LinAlgError):
    ''' A least-squares design matrix is degenerate '''
    pass


class UnsupportedConfigurationError(TensilegError, NotImplementedError):
    ''' A closed form was requested for a configuration it does not cover '''
    pass


class ConfigError(TensilegError, KeyError):
    ''' A configuration key is missing or unknown; the message names its location '''

    def __str__(self):
        return str(self.args[0]) if self.args else ''


class IngestionError(TensilegError, ValueError):
    ''' A data file is missing, empty or malformed; the message names the row or column '''
    pass


class EventMissingError(TensilegError, RuntimeError):
    ''' An expected event (ground contact) did not happen within the horizon '''
    pass


class IncompleteVariantError(TensilegError, KeyError):
    ''' A tendon variant lacks one of the record types needed to compare it '''

    def __str__(self):
        return str(self.args[0]) if self.args else ''


#%% Validation helpers

def check_finite(value, name='value'):
    ''' Raise a DomainError unless every element of value is finite '''
    arr = np.asarray(value, dtype=float)
    if not np.all(np.isfinite(arr)):
        errormsg = f'{name} must be finite, not {value}'
        raise DomainError(errormsg)
    return value


def check_nonnegative(value, name='value'):
    ''' Raise a DomainError unless value is finite and ≥ 0 '''
    check_finite(value, name)
    if np.any(np.asarray(value, dtype=float) < 0):
        errormsg = f'{name} must be non-negative, not {value}'
        raise DomainError(errormsg)
    return value


def check_positive(value, name='value'):
    ''' Raise a DomainError unless value is finite and > 0 '''
    check_finite(value, name)
    if np.any(np.asarray(value, dtype=float) <= 0):
        errormsg = f'{name} must be positive, not {value}'
        raise DomainError(errormsg)
    return value


#%% Define the parameters class

class ParsObj(sc.prettyobj):
    '''
    A class based around performing operations on a self.pars dict. Once
    locked, the parameters can be read but not changed.
    '''

    def __init__(self, pars):
        self._locked = False
        self.update_pars(pars, create=True)
        return

    def __getitem__(self, key):
        ''' Allow model['par_name'] instead of model.pars['par_name'] '''
        try:
            return self.pars[key]
        except:
            all_keys = '\n'.join(list(self.pars.keys()))
            errormsg = f'Key "{key}" not found; available keys:\n{all_keys}'
            raise sc.KeyNotFoundError(errormsg)

    def __setitem__(self, key, value):
        ''' Ditto '''
        self._check_lock()
        if key in self.pars:
            self.pars[key] = value
        else:
            all_keys = '\n'.join(list(self.pars.keys()))
            errormsg = f'Key "{key}" not found; available keys:\n{all_keys}'
            raise sc.KeyNotFoundError(errormsg)
        return

    def _check_lock(self):
        if getattr(self, '_locked', False):
            errormsg = f'{type(self).__name__} is immutable after construction; use copy(**kwargs) to make a modified version'
            raise AttributeError(errormsg)
        return

    def lock(self):
        ''' Prevent further changes to the parameters '''
        self._locked = True
        return self

    def update_pars(self, pars=None, create=False):
        '''
        Update internal dict with new pars.

        Args:
            pars (dict): the parameters to update (if None, do nothing)
            create (bool): if create is False, then raise a KeyNotFoundError if the key does not already exist
        '''
        self._check_lock()
        if pars is not None:
            if not isinstance(pars, dict):
                raise TypeError(f'The pars object must be a dict; you supplied a {type(pars)}')
            if not hasattr(self, 'pars'):
                self.pars = {}
            if not create:
                available_keys = list(self.pars.keys())
                mismatches = [key for key in pars.keys() if key not in available_keys]
                if len(mismatches):
                    errormsg = f'Key(s) {mismatches} not found; available keys are {available_keys}'
                    raise sc.KeyNotFoundError(errormsg)
            self.pars.update(pars)
        return

    def copy(self, **kwargs):
        ''' Return an unlocked deep copy with some parameters changed, then validated and locked again '''
        pars = sc.dcp(self.pars)
        pars.update(kwargs)
        return type(self)(**pars)
