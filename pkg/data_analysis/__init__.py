"""
Convergence harness: reruns a scenario on refined mode grids and reports
whether the decay-rate plateau is stable under refinement.
"""

from .analyzer import ConvergenceAnalyzer, ConvergenceReport, RungResult
from .reporter import ConvergenceReporter
