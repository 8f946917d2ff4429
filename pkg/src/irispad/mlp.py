"""Two-layer classifier head: hidden ReLU layer + logistic output.

All math is float64. Parameter shapes: w1 (h, d), b1 (h,), w2 (1, h),
b2 (1,) (scalar bias kept as a 1-element array so optimizers can update
every parameter uniformly in place).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateData, DimMismatch

EPS = 1e-12  # probability clamp for the cross-entropy


@dataclass
class MlpHead:
    w1: np.ndarray
    b1: np.ndarray
    w2: np.ndarray
    b2: np.ndarray

    @property
    def dim(self) -> int:
        return self.w1.shape[1]

    @property
    def hidden(self) -> int:
        return self.w1.shape[0]

    def params(self) -> dict[str, np.ndarray]:
        return {"w1": self.w1, "b1": self.b1, "w2": self.w2, "b2": self.b2}

    def all_finite(self) -> bool:
        return all(np.all(np.isfinite(p)) for p in self.params().values())

    def copy(self) -> "MlpHead":
        return MlpHead(self.w1.copy(), self.b1.copy(), self.w2.copy(), self.b2.copy())

    def scaled_output(self, c: float) -> "MlpHead":
        """Scale the output layer by c; changes scores but not their order."""
        return MlpHead(self.w1.copy(), self.b1.copy(), c * self.w2, c * self.b2)


def init_head(dim: int, hidden: int, rng: np.random.Generator) -> MlpHead:
    # uniform He-style fan-in bounds, zero biases
    lim1 = np.sqrt(6.0 / dim)
    lim2 = np.sqrt(6.0 / hidden)
    return MlpHead(
        w1=rng.uniform(-lim1, lim1, size=(hidden, dim)),
        b1=np.zeros(hidden),
        w2=rng.uniform(-lim2, lim2, size=(1, hidden)),
        b2=np.zeros(1),
    )


def sigmoid(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def forward(head: MlpHead, x: np.ndarray) -> float:
    """sigmoid(w2 . relu(w1 x + b1) + b2) for a single d-vector."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (head.dim,):
        raise DimMismatch(f"input shape {x.shape}, head expects ({head.dim},)")
    return float(forward_batch(head, x[None, :])[0])


def forward_batch(head: MlpHead, X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != head.dim:
        raise DimMismatch(f"batch shape {X.shape}, head expects (*, {head.dim})")
    a1 = np.maximum(0.0, X @ head.w1.T + head.b1)
    z2 = a1 @ head.w2[0] + head.b2[0]
    return sigmoid(z2)


def bce_loss(p, y, sample_weight: np.ndarray | None = None) -> float:
    """Binary cross-entropy with p clamped to [EPS, 1-EPS].

    sample_weight scales each sample's contribution to the mean (per-class
    reweighting); None means uniform weights of 1.
    """
    p = np.clip(np.asarray(p, dtype=np.float64), EPS, 1.0 - EPS)
    y = np.asarray(y, dtype=np.float64)
    losses = -(y * np.log(p) + (1.0 - y) * np.log(1.0 - p))
    if sample_weight is not None:
        losses = sample_weight * losses
    return float(np.mean(losses))


def batch_loss(head: MlpHead, X: np.ndarray, y: np.ndarray, sample_weight: np.ndarray | None = None) -> float:
    return bce_loss(forward_batch(head, X), y, sample_weight)


@dataclass
class HeadGradients:
    w1: np.ndarray
    b1: np.ndarray
    w2: np.ndarray
    b2: np.ndarray

    def params(self) -> dict[str, np.ndarray]:
        return {"w1": self.w1, "b1": self.b1, "w2": self.w2, "b2": self.b2}

    def max_abs(self) -> float:
        return max(float(np.max(np.abs(p))) if p.size else 0.0 for p in self.params().values())


def backward(
    head: MlpHead, X: np.ndarray, y: np.ndarray, sample_weight: np.ndarray | None = None
) -> HeadGradients:
    """Gradients of the mean clamped BCE over the batch.

    ReLU subgradient at exactly 0 is taken as 0.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if len(X) == 0:
        raise DegenerateData("empty batch")
    if X.ndim != 2 or X.shape[1] != head.dim:
        raise DimMismatch(f"batch shape {X.shape}, head expects (*, {head.dim})")

    n = len(y)
    z1 = X @ head.w1.T + head.b1
    a1 = np.maximum(0.0, z1)
    p = sigmoid(a1 @ head.w2[0] + head.b2[0])

    dz2 = (p - y) / n
    if sample_weight is not None:
        dz2 = sample_weight * dz2
    gw2 = (dz2 @ a1)[None, :]
    gb2 = np.array([dz2.sum()])
    dz1 = np.outer(dz2, head.w2[0])
    dz1[z1 <= 0.0] = 0.0
    gw1 = dz1.T @ X
    gb1 = dz1.sum(axis=0)
    return HeadGradients(w1=gw1, b1=gb1, w2=gw2, b2=gb2)
