"""Registered numerical checks."""
