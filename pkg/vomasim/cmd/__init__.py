"""Modules for command line execution."""
