"""Verification workbench for the distinguished zonal-spherical-function cycle."""
