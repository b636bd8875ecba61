"""Simulation and analysis of continuous-time walks on graphs and digraphs.

Subpackages cover dense linear-algebra kernels (`numkernel`), graph models
and samplers (`graphs`), GKSL generators for quantum stochastic walks
(`gksl`), the nonmoralizing construction (`nonmoral`), propagation and
convergence diagnostics (`analysis`), and spatial search (`search`).
"""

__version__ = "0.1.0"

from . import analysis, gksl, graphs, nonmoral, numkernel, search

__all__ = ["analysis", "gksl", "graphs", "nonmoral", "numkernel", "search", "__version__"]
