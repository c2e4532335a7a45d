'''
Check that correct versions of each library are installed, and raise errors
if not.
'''

#%% Housekeeping

__all__ = ['min_versions', 'check_sciris', 'check_toml']


min_versions = {'sciris':'2.0.0'}


#%% Check dependencies

def check_sciris():
    ''' Check that Sciris is available and the right version '''
    try:
        import sciris as sc
    except ModuleNotFoundError:
        errormsg = 'Sciris is a required dependency but is not found; please install via "pip install sciris"'
        raise ModuleNotFoundError(errormsg)
    ver = sc.__version__
    minver = min_versions['sciris']
    if sc.compareversions(ver, minver) < 0:
        errormsg = f'You have Sciris {ver} but {minver} is required; please upgrade via "pip install --upgrade sciris"'
        raise ImportError(errormsg)
    return


def check_toml():
    ''' Return a TOML parser: tomllib on Python 3.11+, otherwise tomli '''
    try:
        import tomllib
    except ModuleNotFoundError:
        try:
            import tomli as tomllib
        except ModuleNotFoundError:
            errormsg = 'Reading config files needs tomli on Python < 3.11; please install via "pip install tomli"'
            raise ModuleNotFoundError(errormsg)
    return tomllib


# Perform the version checks on import
check_sciris()
