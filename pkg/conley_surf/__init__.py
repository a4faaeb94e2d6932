"""
conley-surf: Conley index toolkit for isolating blocks of surface flows.

Isolating blocks are given as labeled triangulated surfaces with boundary;
the toolkit regularizes them by cutting flow rectangles and classifies the
Conley index, the cohomology ring and the dynamical consequences.
"""

from loguru import logger

__version__ = "0.4.0"

logger.disable("conley_surf")
