"""Synthetic classification data: one Gaussian cluster per class at hypercube vertices.

Randomness comes from numpy's PCG64 generator. The root ``SeedSequence(seed)``
is spawned into one independent child stream per generation stage, in this
order: vertices, points, mixing, label flips, noise columns, column disguise.
Changing one stage (for example ``n_noise``) therefore leaves the draws of the
other stages untouched.
"""

from dataclasses import dataclass

import numpy as np

from .data import LabeledDataset

_STAGES = ("vertices", "points", "mixing", "flips", "noise", "disguise")


@dataclass(frozen=True)
class SynthConfig:
    n_samples: int
    n_classes: int = 2
    n_informative: int = 2
    n_noise: int = 0
    flip_fraction: float = 0.01
    class_sep: float = 1.0
    seed: int = 0
    # debug switches: skip the per-cluster mixing / the final shift-and-scale
    identity_mixing: bool = False
    affine_disguise: bool = True

    def validate(self):
        if self.n_informative < 1:
            raise ValueError("n_informative must be >= 1")
        if self.n_classes < 1 or self.n_classes > 2 ** self.n_informative:
            raise ValueError(
                f"{self.n_classes} classes do not fit on the vertices of a "
                f"{self.n_informative}-dimensional hypercube"
            )
        if self.n_samples < self.n_classes:
            raise ValueError("need at least one sample per class")
        if self.n_noise < 0:
            raise ValueError("n_noise must be >= 0")
        if not 0 <= self.flip_fraction < 1:
            raise ValueError("flip_fraction must lie in [0, 1)")
        if not self.class_sep > 0:
            raise ValueError("class_sep must be positive")


def _streams(seed):
    children = np.random.SeedSequence(seed).spawn(len(_STAGES))
    return {name: np.random.Generator(np.random.PCG64(s)) for name, s in zip(_STAGES, children)}


def hypercube_vertices(rng, n_classes, dim, sep):
    """Distinct vertices of ``{-sep, +sep}^dim`` drawn uniformly without replacement."""
    seen = set()
    out = []
    while len(out) < n_classes:
        bits = rng.integers(0, 2, size=dim)
        key = bits.tobytes()
        if key in seen:
            continue
        seen.add(key)
        out.append(np.where(bits == 1, sep, -sep).astype(np.float64))
    return np.array(out)


def generate(config):
    config.validate()
    rng = _streams(config.seed)
    n, k, c = config.n_samples, config.n_informative, config.n_classes

    centers = hypercube_vertices(rng["vertices"], c, k, config.class_sep)
    labels = np.arange(n) % c
    offsets = rng["points"].standard_normal((n, k))
    if not config.identity_mixing:
        for cls in range(c):
            a = rng["mixing"].uniform(-1.0, 1.0, size=(k, k))
            rows = labels == cls
            offsets[rows] = offsets[rows] @ a.T
    x = centers[labels] + offsets

    flip = rng["flips"].random(n) < config.flip_fraction
    replacement = rng["flips"].integers(0, c, size=n)
    labels = np.where(flip, replacement, labels)

    if config.n_noise:
        x = np.hstack([x, rng["noise"].standard_normal((n, config.n_noise))])
    if config.affine_disguise:
        d = x.shape[1]
        shift = rng["disguise"].uniform(-config.class_sep, config.class_sep, size=d)
        scale = rng["disguise"].uniform(1.0, 10.0, size=d)
        x = (x + shift) * scale
    return LabeledDataset(x, labels, c)
