"""Python setup script for cylhardy"""

from setuptools import setup

VERSION = "0.1.0"

setup(
    name="cylhardy",
    version=VERSION,
    description="Numerical verification of critical cylindrical Sobolev and Hardy identities",
    author="mausy5043",
    keywords=[
        "Hardy inequality",
        "Sobolev inequality",
        "Heisenberg group",
        "homogeneous groups",
        "numerical verification",
    ],
    classifiers=[
        "Development Status :: 4 - Beta",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    packages=["cylhardy"],
    python_requires=">=3.8",
    install_requires=[
        "numpy>=1.21",
        "scipy>=1.8",
    ],
    extras_require={
        "test": [
            "pytest>=7",
            "hypothesis>=6",
        ],
    },
    entry_points={
        "console_scripts": [
            "cylhardy=cylhardy.cli:main",
        ]
    },
)
