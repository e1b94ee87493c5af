"""
Minimal setup.py for compatibility.
All configuration is in pyproject.toml.
"""
from setuptools import setup

setup()