#%% Version information; nothing is printed on import since stdout carries the CLI's tables
from .version import __version__, __versiondate__, __license__


#%% Check that requirements are met
from . import requirements

#%% Import the actual model
from .defaults   import *
from .base       import *
from .misc       import *
from .parameters import *
from .springs    import *
from .rotary     import *
from .leadscrew  import *
from .leg        import *
from .statics    import *
from .dynamics   import *
from .analysis   import *
from .rigdata    import *
from .run        import *
from .plotting   import *
from . import cli
