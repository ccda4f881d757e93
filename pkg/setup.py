#!/usr/bin/env python3

from setuptools import setup, find_packages

setup(
    name="hardylab",
    version="0.1.0",
    python_requires=">=3.8",
    description="Numerical Lab for Hardy-Type Inequalities and Reverse Hölder Weights",
    packages=find_packages(exclude=["test", "test.*"]),
    license="MIT",
    include_package_data=True,
    install_requires=[
        "numpy",
        "sympy",
        "frozendict",
        "scipy",
    ],
    extras_require={
        "test": ["pytest", "hypothesis"],
    },
    entry_points={
        "console_scripts": ["hardy-lab=hardylab.cli:main"],
    },
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
)
