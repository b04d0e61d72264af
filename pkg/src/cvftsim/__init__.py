"""Simulation and analysis of a fault-tolerant CV measurement-based architecture.

Subpackages follow the pipeline: :mod:`gaussian` (state engine),
:mod:`cluster` (lattice and nullifiers), :mod:`gates` (gate angles and
noise), :mod:`gkp` (GKP error probabilities), :mod:`ftcode` (repetition
code, thresholds, figure sweeps), :mod:`montecarlo` (sampling oracle) and
:mod:`cli`.
"""

__version__ = "0.1.0"
