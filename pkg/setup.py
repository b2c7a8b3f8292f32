#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import setuptools
from setuptools import find_packages
import os

from src.oabounds.__version__ import __version__

NAME = 'oa-bounds'
PACKAGE = 'oabounds'
VERSION = __version__
AUTHOR = 'OA-Bounds authors'
EMAIL = ''
DESCRIPTION = 'Rao and Gilbert-Varshamov bounds for mixed level orthogonal arrays'
URL = ''
REQUIRES_PYTHON = '>=3.7.0'
REQUIRED = [
    'commonlibs>=0.5,<0.6',
    'schemadict',
    'numpy>=1.17',
    'scipy>=1.4',
]
README = 'README.rst'
PACKAGE_DIR = 'src/'
LICENSE = 'Apache License 2.0'


here = os.path.abspath(os.path.dirname(__file__))

with open(os.path.join(here, README), "r") as fp:
    long_description = fp.read()

setuptools.setup(
    name=NAME,
    version=VERSION,
    author=AUTHOR,
    author_email=EMAIL,
    description=DESCRIPTION,
    long_description=long_description,
    url=URL,
    include_package_data=True,
    package_dir={'': PACKAGE_DIR},
    license=LICENSE,
    packages=find_packages(where=PACKAGE_DIR),
    python_requires=REQUIRES_PYTHON,
    install_requires=REQUIRED,
    entry_points={
        'console_scripts': [f'{PACKAGE}={PACKAGE}._cli:main'],
    },
    # See: https://pypi.org/classifiers/
    classifiers=[
        "Programming Language :: Python :: 3",
        'Programming Language :: Python :: 3.7',
        "License :: OSI Approved :: Apache Software License",
        "Operating System :: OS Independent",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
)
