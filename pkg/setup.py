'''
Tensileg installation. Requirements are listed in requirements.txt. To install:
    python setup.py develop
'''

import os
import runpy
from setuptools import setup, find_packages

# Load requirements from txt file
with open('requirements.txt') as f:
    requirements = f.read().splitlines()

# Get version
cwd = os.path.abspath(os.path.dirname(__file__))
versionpath = os.path.join(cwd, 'tensileg', 'version.py')
version = runpy.run_path(versionpath)['__version__']

# Get the documentation
with open(os.path.join(cwd, 'README.rst'), "r") as fh:
    long_description = fh.read()

CLASSIFIERS = [
    "Environment :: Console",
    "Intended Audience :: Science/Research",
    "Operating System :: OS Independent",
    "Programming Language :: Python",
    "Topic :: Scientific/Engineering",
    "Development Status :: 4 - Beta",
    "Programming Language :: Python :: 3.8",
]

setup(
    name="tensileg",
    version=version,
    description="Variable-stiffness tensegrity leg toolkit",
    long_description=long_description,
    long_description_content_type="text/x-rst",
    keywords=["tensegrity", "variable stiffness", "legged robot", "spring network", "lead screw"],
    platforms=["OS Independent"],
    classifiers=CLASSIFIERS,
    packages=find_packages(exclude=['tests']),
    include_package_data=True,
    install_requires=requirements,
    python_requires='>=3.8',
    entry_points={
        'console_scripts': [
            'tensileg=tensileg.cli:main',
        ],
    },
)
