"""Numerical toolkit for Dunkl harmonic analysis on radial and rank-one data."""
