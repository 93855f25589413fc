"""Exact combinatorics of centered Wishart moments, random induced quantum
states, and the spectrum-only absolute-PPT tests, with a reproducible Monte
Carlo experiment CLI."""

__version__ = "0.1.0"

from . import appt, asymptotics, linalg, moments, perms, sampling  # noqa: F401
