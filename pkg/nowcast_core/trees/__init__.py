"""
Regression trees and the windowed tree experts.

Modules:
    regression_tree: Variance-reduction tree fitting and prediction
    ensemble: Expert specifications, window sampling and retraining
"""

from nowcast_core.trees.ensemble import ExpertPool, TreeSpec, init_specs, retrain, window_sample
from nowcast_core.trees.regression_tree import FittedTree, fit_tree, predict_tree

__all__ = [
    "FittedTree",
    "fit_tree",
    "predict_tree",
    "TreeSpec",
    "ExpertPool",
    "init_specs",
    "window_sample",
    "retrain",
]
