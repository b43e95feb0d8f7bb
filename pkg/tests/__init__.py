"""
Tests for the hyperoperad package.

One module per package module; the minutes-scale sweeps are marked slow.
"""
