"""
Feature tests for besselturan.

These tests check the numerical behaviour of each module against closed forms, independent
libraries and the documented inequalities, rather than implementation details.
"""
