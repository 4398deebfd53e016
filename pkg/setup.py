#!/usr/bin/env python3

"Setuptools params"

from setuptools import setup, find_packages

VERSION = '0.1'

modname = distname = 'rcutils'

def readme():

    with open('README.md','r') as f:
        return f.read()

setup(
    name=distname,
    version=VERSION,
    description='Random simplicial complex sampling, collapsibility and homology utilities',
    packages=find_packages(exclude=['tests']),
    long_description=readme(),
    long_description_content_type='text/markdown',
    entry_points={'console_scripts': ['rcrun = rcutils.rcrun:main']},
    include_package_data = True,
    python_requires='>=3.8',
    classifiers=[
        "License :: OSI Approved :: GNU General Public License v2 (GPLv2)",
        "Programming Language :: Python :: 3",
        "Development Status :: 2 - Pre-Alpha",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Mathematics",
        ],
    keywords='simplicial complexes random topology homology collapsibility',
    license='GPLv2',
    install_requires=[
        'networkx',
        'numpy >= 1.17',
        'psutil',
        'scipy',
        'setuptools',
        'sympy',
    ],
    extras_require={
        'test': ['pytest'],
        'docs': ['sphinx', 'sphinx_rtd_theme'],
    }
)
