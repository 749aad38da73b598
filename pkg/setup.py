"""
setup
"""
import os
from typing import List

import semver
import setuptools

HERE = os.path.dirname(os.path.abspath(__file__))


def versioning(version: str) -> str:
    """
    odd minor versions are development releases

    X.Y.Z -> X.Y.devZ
    """
    parsed = semver.VersionInfo.parse(version)
    patch = str(parsed.patch)
    if parsed.minor % 2:
        patch = 'dev' + patch
    return f'{parsed.major}.{parsed.minor}.{patch}'


def _read(name: str) -> str:
    with open(os.path.join(HERE, name), 'r', encoding='utf-8') as handle:
        return handle.read()


def get_version() -> str:
    """
    read X.Y.Z from the VERSION file
    """
    return versioning(_read('VERSION').strip())


def get_long_description() -> str:
    """get long_description"""
    return _read('README.md')


def get_install_requires() -> List[str]:
    """get install_requires"""
    return [line for line in _read('requirements.txt').splitlines() if line.strip()]


setuptools.setup(
    name='knotselect',
    version=get_version(),
    author='knotselect contributors',
    description='B-spline regression with simultaneous knot selection',
    long_description=get_long_description(),
    long_description_content_type='text/markdown',
    license='Apache-2.0',
    packages=setuptools.find_packages('src'),
    package_dir={'': 'src'},
    install_requires=get_install_requires(),
    entry_points={
        'console_scripts': [
            'knotselect=knotselect.cli:main',
        ],
    },
    python_requires='>=3.8',
    classifiers=[
        'Programming Language :: Python :: 3.8',
        'License :: OSI Approved :: Apache Software License',
        'Operating System :: OS Independent',
        'Topic :: Scientific/Engineering :: Mathematics',
    ],
)
