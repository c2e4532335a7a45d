'''
Force-law primitives for springs and cables, and their composition in series
and parallel. Every element is also a network, so a leaf is just an element.

All lengths are in m and all forces in N. Cable-borne elements are tension-only
by default: they carry no force at zero or negative extension.
'''

import numpy as np
import sciris as sc
import scipy.optimize as spo
import scipy.integrate as spi
from . import defaults as tld
from . import base as tlb


__all__ = ['SpringNetwork', 'Linear', 'Quadratic', 'SlackOffset', 'Series', 'Parallel', 'staged_network',
           'spring_force', 'network_force', 'network_energy', 'network_tangent', 'effective_linear_stiffness',
           'solve_pretension_displacement', 'slack_length']


#%% Network classes

class SpringNetwork(sc.prettyobj):
    ''' Base class for elements (leaves) and series/parallel compositions '''

    #: Whether the element resists negative extension
    compressive = False

    def force(self, x):
        raise NotImplementedError

    def energy(self, x):
        raise NotImplementedError

    def extension(self, F):
        '''
        Smallest extension at which the network carries the tension F ≥ 0; inf
        if the network can never carry it.
        '''
        raise NotImplementedError

    @property
    def slack_length(self):
        ''' Largest extension at which the network still carries no force '''
        raise NotImplementedError

    @property
    def is_linear(self):
        ''' True if every leaf is a plain linear spring '''
        return False

    @property
    def degenerate(self):
        ''' True if the network carries no force at any extension '''
        return not np.isfinite(self.slack_length)

    def leaves(self):
        return [self]


class Linear(SpringNetwork):
    '''
    Hooke's law spring, F = k·x.

    Args:
        k (float): stiffness, N/m
        tension_only (bool): if True (default), no force for x ≤ 0, as for a spring on a cable

    **Example**::

        spring = tl.Linear(k=500)
        spring.force(0.071) # 35.5 N
    '''

    def __init__(self, k, tension_only=True):
        tlb.check_nonnegative(k, 'k')
        self.k = float(k)
        self.tension_only = bool(tension_only)
        self.compressive = not self.tension_only
        return

    def force(self, x):
        if x <= 0 and self.tension_only:
            return 0.0
        return self.k*x

    def energy(self, x):
        if x <= 0 and self.tension_only:
            return 0.0
        return 0.5*self.k*x**2

    def extension(self, F):
        if F <= 0:
            return 0.0
        if self.k == 0:
            return np.inf
        return F/self.k

    @property
    def slack_length(self):
        return np.inf if self.k == 0 else 0.0

    @property
    def is_linear(self):
        return True


class Quadratic(SpringNetwork):
    '''
    Spring with both linear and quadratic stiffness, F = k_l·x + k_q·x².

    If the element is allowed to push, the law is extended oddly for negative
    extension, F = k_l·x − k_q·x².

    Args:
        k_l (float): linear coefficient, N/m
        k_q (float): quadratic coefficient, N/m²
        tension_only (bool): if True (default), no force for x ≤ 0
    '''

    def __init__(self, k_l, k_q, tension_only=True):
        tlb.check_nonnegative(k_l, 'k_l')
        tlb.check_nonnegative(k_q, 'k_q')
        self.k_l = float(k_l)
        self.k_q = float(k_q)
        self.tension_only = bool(tension_only)
        self.compressive = not self.tension_only
        return

    def force(self, x):
        if x <= 0 and self.tension_only:
            return 0.0
        return self.k_l*x + self.k_q*x*abs(x)

    def energy(self, x):
        if x <= 0 and self.tension_only:
            return 0.0
        return 0.5*self.k_l*x**2 + self.k_q*abs(x)**3/3

    def extension(self, F):
        if F <= 0:
            return 0.0
        if self.k_q == 0:
            return F/self.k_l if self.k_l > 0 else np.inf
        return 2*F/(self.k_l + np.sqrt(self.k_l**2 + 4*self.k_q*F)) # Positive root, stable form

    @property
    def slack_length(self):
        return np.inf if (self.k_l == 0 and self.k_q == 0) else 0.0


class SlackOffset(SpringNetwork):
    '''
    An element attached through a cable with slack: no force until the extension
    exceeds the engagement offset, then the inner law applied to the excess.

    Args:
        inner (SpringNetwork): the element that engages
        engagement_offset (float): slack to take up before engagement, m
    '''

    def __init__(self, inner, engagement_offset):
        if not isinstance(inner, SpringNetwork):
            errormsg = f'The inner element must be a SpringNetwork, not {type(inner)}'
            raise TypeError(errormsg)
        tlb.check_nonnegative(engagement_offset, 'engagement_offset')
        self.inner = inner
        self.engagement_offset = float(engagement_offset)
        return

    def force(self, x):
        if x <= self.engagement_offset:
            return 0.0
        return self.inner.force(x - self.engagement_offset)

    def energy(self, x):
        if x <= self.engagement_offset:
            return 0.0
        return self.inner.energy(x - self.engagement_offset)

    def extension(self, F):
        return self.engagement_offset + self.inner.extension(F)

    @property
    def slack_length(self):
        return self.engagement_offset + self.inner.slack_length


class _Composite(SpringNetwork):

    kind = None

    def __init__(self, *children):
        if len(children) == 1 and isinstance(children[0], (list, tuple)):
            children = children[0]
        children = list(children)
        if len(children) < 2:
            errormsg = f'A {self.kind} node needs at least 2 children, not {len(children)}'
            raise ValueError(errormsg)
        for c,child in enumerate(children):
            if not isinstance(child, SpringNetwork):
                errormsg = f'Child {c} of the {self.kind} node must be a SpringNetwork, not {type(child)}'
                raise TypeError(errormsg)
        self.children = children
        return

    @property
    def is_linear(self):
        return all(child.is_linear for child in self.children)

    def leaves(self):
        return [leaf for child in self.children for leaf in child.leaves()]


class Parallel(_Composite):
    ''' Children share the extension; forces add '''

    kind = 'parallel'

    @property
    def compressive(self):
        return all(child.compressive for child in self.children)

    def force(self, x):
        return sum(child.force(x) for child in self.children)

    def energy(self, x):
        return sum(child.energy(x) for child in self.children)

    @property
    def slack_length(self):
        return min(child.slack_length for child in self.children)

    def extension(self, F):
        x_slack = self.slack_length
        if F <= 0 or not np.isfinite(x_slack):
            return x_slack if F <= 0 else np.inf
        return _invert(self.force, F, x_slack)


class Series(_Composite):
    ''' Children share the force; extensions add '''

    kind = 'series'

    @property
    def compressive(self):
        return all(child.compressive for child in self.children)

    def force(self, x):
        if self.is_linear:
            k_eff = effective_linear_stiffness(self)
            if x <= 0 and not self.compressive:
                return 0.0
            return k_eff*x
        if x < 0 and self.compressive:
            return -self.force(-x) # Odd laws
        x_slack = self.slack_length
        if x <= x_slack:
            return 0.0

        def residual(F):
            return sum(child.extension(F) for child in self.children) - x

        F_hi = 1.0
        for doubling in range(tld.max_bracket_doublings):
            if residual(F_hi) >= 0:
                break
            F_hi *= 2
        else:
            errormsg = f'Could not bracket the series force at x={x}: residual {residual(F_hi):0.3e} m at F={F_hi:0.3e} N'
            raise tlb.ConvergenceError(errormsg)
        try:
            F = spo.brentq(residual, 0.0, F_hi, xtol=tld.root_xtol)
        except RuntimeError as E:
            errormsg = f'Series force solve did not converge at x={x}: {E}'
            raise tlb.ConvergenceError(errormsg) from E
        return F

    def energy(self, x):
        if self.is_linear:
            if x <= 0 and not self.compressive:
                return 0.0
            return 0.5*effective_linear_stiffness(self)*x**2
        if x < 0 and self.compressive:
            return self.energy(-x)
        x_slack = self.slack_length
        if x <= x_slack:
            return 0.0
        value, _ = spi.quad(self.force, x_slack, x, epsabs=1e-13, limit=200)
        return value

    @property
    def slack_length(self):
        return sum(child.slack_length for child in self.children)

    def extension(self, F):
        return sum(child.extension(F) for child in self.children)


def _invert(force, F, x_lo):
    ''' Find the smallest extension above x_lo where a non-decreasing force law reaches F '''
    span = max(abs(x_lo), 1e-3)
    x_hi = x_lo + span
    for doubling in range(tld.max_bracket_doublings):
        if force(x_hi) >= F:
            break
        span *= 2
        x_hi = x_lo + span
    else:
        return np.inf
    try:
        return spo.brentq(lambda x: force(x) - F, x_lo, x_hi, xtol=tld.root_xtol)
    except RuntimeError as E:
        errormsg = f'Extension solve did not converge for F={F}: {E}'
        raise tlb.ConvergenceError(errormsg) from E


def staged_network(k=None, offsets=None):
    '''
    The parallel-slack multi-spring system: identical springs attached through
    cables of staggered length so they engage one after another.

    Args:
        k (float): stiffness of each spring, N/m (default 388.4)
        offsets (list): engagement offset of each spring, m (default 0, 12 and 36 mm)

    **Example**::

        net = tl.staged_network()
        net.force(0.050) # 39.62 N
    '''
    k       = tld.spring_k if k is None else k
    offsets = tld.spring_offsets if offsets is None else offsets
    branches = [SlackOffset(Linear(k), offset) for offset in sc.tolist(offsets)]
    if len(branches) == 1:
        return branches[0]
    return Parallel(branches)


#%% Functional interface

def spring_force(element, x):
    ''' Force of a single element at extension x (m), in N '''
    tlb.check_finite(x, 'x')
    return element.force(x)


def network_force(net, x):
    '''
    Force of a network at extension x (m), in N. Parallel children add at the
    common extension; series children carry a common force whose extensions add
    up to x (closed form for all-linear series, otherwise solved numerically).
    '''
    tlb.check_finite(x, 'x')
    return net.force(x)


def network_energy(net, x):
    ''' Elastic energy stored in the network at extension x, in J '''
    tlb.check_finite(x, 'x')
    return net.energy(x)


def network_tangent(net, x, h=None):
    ''' Numerical tangent stiffness dF/dx by central difference, in N/m '''
    tlb.check_finite(x, 'x')
    h = tld.fd_step if h is None else h
    return (net.force(x+h) - net.force(x-h))/(2*h)


def slack_length(net):
    ''' Largest extension at which the network carries no force (inf if it never does) '''
    return net.slack_length


def effective_linear_stiffness(net):
    '''
    Closed-form stiffness of a network made only of linear springs: parallel
    stiffnesses add, series stiffnesses combine as the reciprocal of the sum of
    reciprocals.

    **Examples**::

        tl.effective_linear_stiffness(tl.Series(tl.Linear(500), tl.Linear(500))) # 250 N/m
        tl.effective_linear_stiffness(tl.Parallel([tl.Linear(388.4)]*3)) # 1165.2 N/m
    '''
    if isinstance(net, Linear):
        return net.k
    elif isinstance(net, Parallel):
        return sum(effective_linear_stiffness(child) for child in net.children)
    elif isinstance(net, Series):
        stiffnesses = [effective_linear_stiffness(child) for child in net.children]
        if any(k == 0 for k in stiffnesses):
            return 0.0
        return 1.0/sum(1.0/k for k in stiffnesses)
    else:
        errormsg = f'Closed-form stiffness needs linear springs only, but the network contains a {type(net).__name__} element; use network_tangent() instead'
        raise tlb.UnsupportedConfigurationError(errormsg)


def solve_pretension_displacement(element, F0):
    '''
    Initial stretch x0 that produces the pretension F0. For a quadratic spring this
    is the non-negative root of k_l·x0 + k_q·x0² = F0; for a linear spring x0 = F0/k;
    for any other network it is found numerically.

    Args:
        element (SpringNetwork): usually a Quadratic or Linear element
        F0 (float): pretension force, N

    Returns:
        x0 (float): pretension displacement, m
    '''
    tlb.check_finite(F0, 'F0')
    if F0 < 0:
        errormsg = f'Pretension force must be non-negative, not {F0}'
        raise tlb.DomainError(errormsg)
    if F0 == 0:
        return 0.0 if isinstance(element, (Linear, Quadratic)) else element.slack_length
    x0 = element.extension(F0)
    if not np.isfinite(x0):
        errormsg = f'A pretension of {F0} N cannot be reached: the {type(element).__name__} element has zero stiffness'
        raise tlb.DomainError(errormsg)
    return x0
