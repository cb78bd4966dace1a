#!/usr/bin/env python3
"""
Setup script for RZF-SKETCH

Sketched regularized zero-forcing beamforming library and experiment harness
"""

from setuptools import setup, find_packages
from pathlib import Path

# Read README file
readme_file = Path(__file__).parent / "README.md"
long_description = readme_file.read_text(encoding="utf-8") if readme_file.exists() else ""

# Read requirements
requirements_file = Path(__file__).parent / "requirements.txt"
requirements = []
if requirements_file.exists():
    with open(requirements_file, 'r', encoding='utf-8') as f:
        requirements = [line.strip() for line in f if line.strip() and not line.startswith('#')]

setup(
    name="rzf-sketch",
    version="1.0.0",
    description="Sketched regularized zero-forcing beamforming",
    long_description=long_description,
    long_description_content_type="text/markdown",
    # The package keeps its ``src`` name so tests and the CLI share one import path
    packages=find_packages(include=["src", "src.*"]),
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    python_requires=">=3.10",
    install_requires=requirements,
    extras_require={
        "dev": [
            "black>=23.11.0",
            "pylint>=3.0.3",
            "mypy>=1.7.1",
            "pytest>=7.4.3",
            "pytest-cov>=4.1.0",
        ],
    },
    entry_points={
        "console_scripts": [
            "rzf-sketch=src.main:main",
        ],
    },
    zip_safe=False,
)
