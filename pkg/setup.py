#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""The setup script."""

from setuptools import find_packages, setup

with open('README.rst') as readme_file:
    readme = readme_file.read()

with open('HISTORY.rst') as history_file:
    history = history_file.read()

requirements = [
    'attrs>=19.2',
    'numpy>=1.20',
    'scipy>=1.5',
]

test_requirements = [
    'pytest',
    'hypothesis',
]

cov_requirements = [
    'coverage',
]

lint_requirements = [
    'flake8',
    'flake8-import-order',
]

setup(
    name='dcck',
    version='0.1.0',
    description="Split and merge the kernels of convolutional networks while they train.",
    long_description=readme + '\n\n' + history,
    author="DCCK Developers",
    author_email='',
    packages=find_packages(include=['dcck', 'dcck.*']),
    include_package_data=True,
    install_requires=requirements,
    tests_require=test_requirements,
    extras_require={
        'test': test_requirements,
        'cov': cov_requirements,
        'lint': lint_requirements,
    },
    entry_points={
        'console_scripts': [
            'dcck=dcck.cli.main:main',
        ],
    },
    license="Apache Software License 2.0",
    test_suite='tests',
    zip_safe=False,
    keywords='CNN, kernels, k-means, network compression',
    classifiers=[
        'Development Status :: 2 - Pre-Alpha',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: Apache Software License',
        'Natural Language :: English',
        'Topic :: Scientific/Engineering :: Artificial Intelligence',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
    ],
)
