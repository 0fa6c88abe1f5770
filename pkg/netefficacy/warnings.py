"""
This module contains a boolean variable for each warning that may be raised
by netefficacy. To suppress a warning, set the corresponding variable to ``False``.
This is an alternative to using ``warnings.filterwarnings`` that:

- offers a better developer experience since setting a boolean is
  easier and cleaner than writing a regex that matches a warning message
- can be used by netefficacy itself to skip the checks that (may) generate a warning.
"""
from __future__ import annotations

exclude_self_deviation = True
"""Warn when a simulation uses the exclude-self target rule, whose expectation
is ``α·N_E·(N_E−1)/(N_Ω−1)`` instead of ``α·N_E²/N_Ω``."""

preferred_capacity_binding = True
"""Warn when the preferred network's own capacity, not the default network,
limits the joint capacity of a heterogeneous network."""
