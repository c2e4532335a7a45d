# -*- coding: utf-8 -*-

__all__ = ['__version__', '__versiondate__', '__license__']

__version__ = '0.3.0'
__versiondate__ = '2026-10-18'
__license__ = f'Tensileg {__version__} ({__versiondate__})'
