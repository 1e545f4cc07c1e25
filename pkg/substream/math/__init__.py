"""
Numerical side of substream: the trackers and the theory
(limiting ODEs and Monte Carlo checks).
"""
