"""Exact-recovery limits for binary MRF labels.

Core pieces: graph families and metrics (graphs), the noisy generative model
(genmodel), closed-form minimax/MLE bounds (bounds), exhaustive MLE solvers
(solver), the Monte Carlo harness (montecarlo), figure-data grids (figures),
and a FastAPI service plus thin CLI client (service, cli).
"""

__version__ = "0.1.0"
