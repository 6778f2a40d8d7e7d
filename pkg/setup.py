"""
Fallback for older setuptools or environments where pyproject.toml metadata is not read.
Prefer building/installing via pyproject.toml when possible.
"""
from setuptools import setup, find_packages

setup(
    name="coop2nf",
    version="1.0.0",
    install_requires=[
        "numpy>=1.24",
    ],
    packages=find_packages(exclude=["tests"]),
    entry_points={
        "console_scripts": [
            "coop2nf=coop2nf:main",
        ],
    },
    python_requires=">=3.8",
)
