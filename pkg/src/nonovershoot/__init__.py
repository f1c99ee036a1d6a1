"""Simulation toolkit for negative-drift random walks conditioned to reach a
high level, the stable subordinator they converge to, and the non-overshooting
limit process.

Submodules
----------
model          increment distribution pair (original / tilted) and calibration
paths          jump-skeleton paths, first passage, exact time changes
walk           tilted-measure walk simulation and importance-sampling estimators
subordinator   stable subordinator, overshoot law, conditioned sampling
limit_process  the non-overshooting process: construction, moments, kernel
asymptotics    ladder heights, tail constants, regular-variation checks
stats          weighted ECDFs, KS tests, Monte Carlo aggregation
cli            command-line front end
"""

from nonovershoot.backend import active_backend, has_numba

__version__ = "0.1.0"

__all__ = ["active_backend", "has_numba", "__version__"]
