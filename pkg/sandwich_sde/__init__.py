"""
Simulation of sandwiched SDEs: singular-drift equations confined above a curve,
or between two curves, and driven by Hölder-continuous noise.
"""

__version__ = "0.1.0"
