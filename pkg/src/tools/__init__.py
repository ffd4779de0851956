"""Numerical modules of the nonharmonic spectral toolkit."""
