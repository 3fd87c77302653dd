"""Decision trees with Max-Cut splits and node-local PCA feature construction."""

__version__ = "0.1.0"

from .data import LabeledDataset, load_csv  # noqa: E402
from .splits import BACKEND, Criterion, SplitCandidate, select_best_split  # noqa: E402
from .tree import ALGORITHMS, DecisionTree, FeatureMode, TreeConfig, algorithm, build_tree  # noqa: E402

__all__ = [
    "ALGORITHMS",
    "BACKEND",
    "Criterion",
    "DecisionTree",
    "FeatureMode",
    "LabeledDataset",
    "SplitCandidate",
    "TreeConfig",
    "algorithm",
    "build_tree",
    "load_csv",
    "select_best_split",
]
