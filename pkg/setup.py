#!/usr/bin/env python
from __future__ import annotations

from pathlib import Path

from setuptools import find_packages
from setuptools import setup


def make_long_description(write_file=False):
    readme = Path('README.rst').read_text(encoding='utf-8')
    # the title is repeated by PyPI's own page header
    start = readme.find('.. docs-index-start')
    long_description = readme[start:]
    if write_file:
        Path('PYPI_README.rst').write_text(long_description, encoding='utf-8')
    return long_description


setup(
    name='netefficacy',
    setup_requires=['setuptools_scm'],
    use_scm_version={
        'write_to': 'netefficacy/_version.py',
        'fallback_version': '0.1.0',
    },
    description='Efficacy of communication networks inside their information systems: '
                'closed-form results, Monte Carlo checks and value models.',
    long_description_content_type='text/x-rst',
    long_description=make_long_description(),
    license='BSD 3-Clause',
    keywords=['network effect', 'Metcalfe', 'network efficacy', 'capacity planning',
              'Monte Carlo', 'simulation'],
    classifiers=[
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: BSD License',
        'Natural Language :: English',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
        'Topic :: System :: Networking',
    ],
    packages=find_packages(include=['netefficacy', 'netefficacy.*']),
    package_data={'netefficacy': ['scenarios/*.scenario', 'py.typed']},
    zip_safe=False,
    include_package_data=True,
    python_requires='>=3.9',
    install_requires=[
        'click >= 8.0, < 9.0',
        'cloup >= 2.1, < 4.0',
        'numpy >= 1.22',
        'PyYAML >= 6.0',
        'networkx >= 2.8',
    ],
    entry_points={
        'console_scripts': ['netefficacy = netefficacy._cli:main'],
    },
)
