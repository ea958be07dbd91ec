"""Arithmetic-statistics workbench for cubic fields and Frobenian prime sets."""

__version__ = "0.1.0"
