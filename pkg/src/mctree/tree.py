"""CART-style classification trees for the eight split-criterion / feature-mode variants."""

import enum
import json
from dataclasses import dataclass, field

import numpy as np

from . import pca
from .data import LabeledDataset, StandardizerParams, apply_standardizer, standardize_fit
from .splits import Criterion, select_best_split

FORMAT = "mctree-tree/v1"


class FeatureMode(str, enum.Enum):
    ORIGINAL = "original"
    GLOBAL_PCA = "global_pca"
    NODE_FEATURES_PCA = "node_features_pca"
    NODE_MEANS_PCA = "node_means_pca"


_MODE_NAMES = {
    FeatureMode.ORIGINAL: "Features",
    FeatureMode.GLOBAL_PCA: "Pre PCA Features",
    FeatureMode.NODE_FEATURES_PCA: "Node Features PCA",
    FeatureMode.NODE_MEANS_PCA: "Node Means PCA",
}
_CRITERION_NAMES = {Criterion.GINI: "Gini", Criterion.MAXCUT: "Max Cut"}
_MODE_KEYS = {
    FeatureMode.ORIGINAL: "features",
    FeatureMode.GLOBAL_PCA: "pre-pca",
    FeatureMode.NODE_FEATURES_PCA: "node-pca",
    FeatureMode.NODE_MEANS_PCA: "node-means",
}


@dataclass(frozen=True)
class TreeConfig:
    criterion: Criterion = Criterion.GINI
    feature_mode: FeatureMode = FeatureMode.ORIGINAL
    standardize: bool = False

    def __post_init__(self):
        object.__setattr__(self, "criterion", Criterion(self.criterion))
        object.__setattr__(self, "feature_mode", FeatureMode(self.feature_mode))

    @property
    def name(self):
        return f"{_CRITERION_NAMES[self.criterion]} {_MODE_NAMES[self.feature_mode]}"

    @property
    def key(self):
        return f"{self.criterion.value}-{_MODE_KEYS[self.feature_mode]}"

    def to_dict(self):
        return {
            "criterion": self.criterion.value,
            "feature_mode": self.feature_mode.value,
            "standardize": self.standardize,
        }


# Short keys (e.g. "maxcut-node-means") for the eight algorithms, in the
# usual reporting order: Gini variants first, then Max-Cut.
ALGORITHMS = {
    TreeConfig(c, m).key: TreeConfig(c, m)
    for c in (Criterion.GINI, Criterion.MAXCUT)
    for m in FeatureMode
}


def algorithm(key, standardize=False):
    try:
        base = ALGORITHMS[key]
    except KeyError:
        raise ValueError(f"unknown algorithm {key!r}; choose from {', '.join(ALGORITHMS)}") from None
    return TreeConfig(base.criterion, base.feature_mode, standardize)


@dataclass(frozen=True)
class Axis:
    feature: int

    def values(self, x):
        return x[:, self.feature]

    def to_dict(self):
        return {"kind": "axis", "feature": self.feature}


@dataclass(frozen=True, eq=False)
class Oblique:
    center: np.ndarray
    direction: np.ndarray

    def values(self, x):
        return pca.project(x, self.center, self.direction)

    def to_dict(self):
        return {"kind": "oblique", "center": self.center.tolist(), "direction": self.direction.tolist()}

    def __eq__(self, other):
        return (
            isinstance(other, Oblique)
            and np.array_equal(self.center, other.center)
            and np.array_equal(self.direction, other.direction)
        )


@dataclass(eq=False)
class Leaf:
    label: int
    support: np.ndarray

    def __eq__(self, other):
        return isinstance(other, Leaf) and self.label == other.label and np.array_equal(self.support, other.support)


@dataclass
class Internal:
    projector: object
    threshold: float
    left: object = None
    right: object = None
    # number of candidate directions searched at this node
    n_candidates: int = 0


@dataclass
class DecisionTree:
    root: object
    config: TreeConfig
    d: int
    class_count: int
    global_basis: pca.PcaBasis = None
    standardizer: StandardizerParams = None
    label_names: tuple = field(default=())

    def prepare(self, x):
        """Map raw inputs into the space the root node splits in."""
        x = np.asarray(x, dtype=np.float64)
        if x.ndim == 1:
            x = x[None, :]
        if x.ndim != 2 or x.shape[1] != self.d:
            raise ValueError(f"expected samples with {self.d} features, got shape {x.shape}")
        if self.standardizer is not None:
            x = apply_standardizer(x, self.standardizer)
        if self.global_basis is not None:
            x = pca.transform(x, self.global_basis)
        return x

    def predict(self, x):
        x = self.prepare(x)
        out = np.empty(x.shape[0], dtype=np.intp)
        stack = [(self.root, np.arange(x.shape[0]))]
        while stack:
            node, idx = stack.pop()
            if isinstance(node, Leaf):
                out[idx] = node.label
                continue
            go_left = node.projector.values(x[idx]) <= node.threshold
            stack.append((node.left, idx[go_left]))
            stack.append((node.right, idx[~go_left]))
        return out

    def apply(self, x):
        """Id (pre-order index) of the leaf each sample lands in."""
        x = self.prepare(x)
        ids = {id(node): i for i, node in enumerate(iter_nodes(self.root))}
        out = np.empty(x.shape[0], dtype=np.intp)
        stack = [(self.root, np.arange(x.shape[0]))]
        while stack:
            node, idx = stack.pop()
            if isinstance(node, Leaf):
                out[idx] = ids[id(node)]
                continue
            go_left = node.projector.values(x[idx]) <= node.threshold
            stack.append((node.left, idx[go_left]))
            stack.append((node.right, idx[~go_left]))
        return out

    @property
    def n_leaves(self):
        return count_leaves(self)

    @property
    def depth(self):
        return tree_depth(self)

    def to_dict(self):
        nodes = []
        index = {}
        for node in iter_nodes(self.root):
            index[id(node)] = len(nodes)
            nodes.append(node)
        out = []
        for node in nodes:
            if isinstance(node, Leaf):
                out.append({"kind": "leaf", "class": int(node.label), "support": node.support.tolist()})
            else:
                out.append({
                    "kind": "internal",
                    "projector": node.projector.to_dict(),
                    "threshold": float(node.threshold),
                    "left": index[id(node.left)],
                    "right": index[id(node.right)],
                    "n_candidates": int(node.n_candidates),
                })
        return {
            "format": FORMAT,
            "config": self.config.to_dict(),
            "d": self.d,
            "class_count": self.class_count,
            "label_names": list(self.label_names),
            "standardizer": None if self.standardizer is None else self.standardizer.to_dict(),
            "global_basis": None if self.global_basis is None else self.global_basis.to_dict(),
            "nodes": out,
        }

    @classmethod
    def from_dict(cls, doc):
        if doc.get("format") != FORMAT:
            raise ValueError(f"unsupported tree format {doc.get('format')!r}")
        raw = doc["nodes"]
        built = [None] * len(raw)
        # children always follow their parent in pre-order
        for i in reversed(range(len(raw))):
            r = raw[i]
            if r["kind"] == "leaf":
                built[i] = Leaf(int(r["class"]), np.asarray(r["support"], dtype=np.int64))
                continue
            p = r["projector"]
            if p["kind"] == "axis":
                proj = Axis(int(p["feature"]))
            else:
                proj = Oblique(np.asarray(p["center"], dtype=float), np.asarray(p["direction"], dtype=float))
            built[i] = Internal(proj, float(r["threshold"]), built[r["left"]], built[r["right"]],
                                int(r.get("n_candidates", 0)))
        std = doc.get("standardizer")
        basis = doc.get("global_basis")
        return cls(
            root=built[0],
            config=TreeConfig(**doc["config"]),
            d=int(doc["d"]),
            class_count=int(doc["class_count"]),
            global_basis=None if basis is None else pca.PcaBasis.from_dict(basis),
            standardizer=None if std is None else StandardizerParams.from_dict(std),
            label_names=tuple(doc.get("label_names", ())),
        )

    def to_json(self, path=None):
        text = json.dumps(self.to_dict(), indent=1)
        if path is not None:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(text)
        return text

    @classmethod
    def from_json(cls, path):
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def iter_nodes(root):
    """Pre-order traversal (node, then left subtree, then right subtree)."""
    stack = [root]
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, Internal):
            stack.append(node.right)
            stack.append(node.left)


def _leaf(counts):
    # argmax picks the lowest class id on ties
    return Leaf(int(np.argmax(counts)), counts)


def _split_node(x, y, class_count, config):
    """Search one node. Returns (projector, threshold, n_candidates, left_mask) or None."""
    mode = config.feature_mode
    if mode in (FeatureMode.ORIGINAL, FeatureMode.GLOBAL_PCA):
        cand = select_best_split(x, y, config.criterion, n_classes=class_count)
        if cand is None:
            return None
        proj = Axis(cand.feature_index)
        n_cand = x.shape[1]
    else:
        if mode is FeatureMode.NODE_FEATURES_PCA:
            basis = pca.fit_pca(x)
        else:
            basis = pca.fit_means_pca(x, y, class_count)
        if basis.p == 0:
            return None
        cand = select_best_split(pca.transform_fast(x, basis), y, config.criterion, n_classes=class_count)
        if cand is None:
            return None
        proj = Oblique(basis.center, basis.components[cand.feature_index].copy())
        n_cand = basis.p
    go_left = proj.values(x) <= cand.threshold
    n_left = int(go_left.sum())
    if n_left == 0 or n_left == len(go_left):
        return None
    return proj, cand.threshold, n_cand, go_left


def build_tree(train, config=TreeConfig()):
    """Grow a tree until every leaf is pure or admits no split."""
    if not isinstance(train, LabeledDataset):
        raise TypeError("build_tree expects a LabeledDataset")
    if train.n < 1:
        raise ValueError("cannot build a tree from an empty training set")
    config = TreeConfig(config.criterion, config.feature_mode, config.standardize)
    x = train.features
    y = train.labels
    k = train.class_count

    standardizer = None
    if config.standardize:
        standardizer = standardize_fit(train)
        x = apply_standardizer(x, standardizer)
    global_basis = None
    if config.feature_mode is FeatureMode.GLOBAL_PCA:
        global_basis = pca.fit_pca(x)
        x = pca.transform(x, global_basis)

    holder = Internal(None, 0.0)
    stack = [(np.arange(train.n), holder, "left")]
    while stack:
        idx, parent, side = stack.pop()
        yy = y[idx]
        counts = np.bincount(yy, minlength=k).astype(np.int64)
        found = None
        if np.count_nonzero(counts) > 1:
            found = _split_node(x[idx], yy, k, config)
        if found is None:
            setattr(parent, side, _leaf(counts))
            continue
        proj, threshold, n_cand, go_left = found
        node = Internal(proj, threshold, n_candidates=n_cand)
        setattr(parent, side, node)
        stack.append((idx[~go_left], node, "right"))
        stack.append((idx[go_left], node, "left"))

    return DecisionTree(
        root=holder.left,
        config=config,
        d=train.d,
        class_count=k,
        global_basis=global_basis,
        standardizer=standardizer,
        label_names=train.label_names,
    )


def predict(tree, sample):
    """Class id for a single sample of length ``tree.d``."""
    sample = np.asarray(sample, dtype=np.float64)
    if sample.ndim != 1:
        raise ValueError("predict expects one sample; use DecisionTree.predict for batches")
    return int(tree.predict(sample[None, :])[0])


def count_leaves(tree):
    root = tree.root if isinstance(tree, DecisionTree) else tree
    return sum(isinstance(n, Leaf) for n in iter_nodes(root))


def tree_depth(tree):
    root = tree.root if isinstance(tree, DecisionTree) else tree
    best = 0
    stack = [(root, 0)]
    while stack:
        node, depth = stack.pop()
        if isinstance(node, Internal):
            stack.append((node.left, depth + 1))
            stack.append((node.right, depth + 1))
        else:
            best = max(best, depth)
    return best
