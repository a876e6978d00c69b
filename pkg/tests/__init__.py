"""Test package for gifnet."""
