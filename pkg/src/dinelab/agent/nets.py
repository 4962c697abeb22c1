"""Small fully connected networks with hand-rolled backprop.

Float64 throughout: keeps checkpoint round-trips exact and makes
finite-difference gradient checks meaningful.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np


class Mlp:
    """ReLU hidden layers, linear output head.

    ``dims`` is the full layer spec, e.g. ``[state_dim, 64, 64, n_actions]``.
    An empty hidden list gives a single linear map, which is handy for
    constant-output stub networks in tests.
    """

    def __init__(self, dims: Sequence[int], rng: np.random.Generator):
        if len(dims) < 2:
            raise ValueError(f"need at least input and output dims, got {list(dims)}")
        if any(d <= 0 for d in dims):
            raise ValueError(f"layer dims must be positive, got {list(dims)}")
        self.dims = tuple(int(d) for d in dims)
        self.weights: list[np.ndarray] = []
        self.biases: list[np.ndarray] = []
        for fan_in, fan_out in zip(self.dims[:-1], self.dims[1:]):
            bound = 1.0 / np.sqrt(fan_in)
            self.weights.append(rng.uniform(-bound, bound, size=(fan_in, fan_out)))
            self.biases.append(np.zeros(fan_out))

    @property
    def in_dim(self) -> int:
        return self.dims[0]

    @property
    def out_dim(self) -> int:
        return self.dims[-1]

    def forward(self, x: np.ndarray) -> np.ndarray:
        """Batched forward pass; x has shape (batch, in_dim)."""
        out, _ = self._forward_cached(x)
        return out

    def forward_one(self, x: np.ndarray) -> np.ndarray:
        """Forward pass for a single observation vector."""
        x = np.asarray(x, dtype=float)
        if x.ndim != 1 or x.shape[0] != self.in_dim:
            raise ValueError(f"expected state of dim {self.in_dim}, got shape {x.shape}")
        return self.forward(x[None, :])[0]

    def _forward_cached(self, x: np.ndarray):
        x = np.asarray(x, dtype=float)
        if x.ndim != 2 or x.shape[1] != self.in_dim:
            raise ValueError(f"expected batch of dim {self.in_dim}, got shape {x.shape}")
        activations = [x]
        h = x
        last = len(self.weights) - 1
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            h = h @ w + b
            if i != last:
                h = np.maximum(h, 0.0)
            activations.append(h)
        return h, activations

    def backward(self, activations: list[np.ndarray], d_out: np.ndarray):
        """Gradients of a scalar loss given dL/d_output.

        Returns (weight_grads, bias_grads) matching self.weights/biases.
        """
        g_w = [np.empty(0)] * len(self.weights)
        g_b = [np.empty(0)] * len(self.biases)
        delta = d_out
        for i in range(len(self.weights) - 1, -1, -1):
            g_w[i] = activations[i].T @ delta
            g_b[i] = delta.sum(axis=0)
            if i > 0:
                delta = delta @ self.weights[i].T
                # ReLU mask from the stored post-activation values
                delta = delta * (activations[i] > 0.0)
        return g_w, g_b

    def sgd_step(self, g_w: list[np.ndarray], g_b: list[np.ndarray], lr: float) -> None:
        for w, g in zip(self.weights, g_w):
            w -= lr * g
        for b, g in zip(self.biases, g_b):
            b -= lr * g

    def copy_weights_from(self, other: "Mlp") -> None:
        if self.dims != other.dims:
            raise ValueError(f"architecture mismatch: {self.dims} vs {other.dims}")
        self.weights = [w.copy() for w in other.weights]
        self.biases = [b.copy() for b in other.biases]

    def clone(self) -> "Mlp":
        twin = Mlp.__new__(Mlp)
        twin.dims = self.dims
        twin.weights = [w.copy() for w in self.weights]
        twin.biases = [b.copy() for b in self.biases]
        return twin


def chosen_action_loss_and_grads(net: Mlp, states: np.ndarray, actions: np.ndarray,
                                 targets: np.ndarray):
    """MSE between net(states)[i, actions[i]] and targets[i], plus its gradients.

    Loss is the batch mean of squared errors; only the chosen action's output
    receives gradient.
    """
    out, cache = net._forward_cached(states)
    idx = np.arange(len(actions))
    err = out[idx, actions] - targets
    loss = float(np.mean(err ** 2))
    d_out = np.zeros_like(out)
    d_out[idx, actions] = 2.0 * err / len(actions)
    g_w, g_b = net.backward(cache, d_out)
    return loss, g_w, g_b


def regression_loss_and_grads(net: Mlp, x: np.ndarray, y: np.ndarray):
    """Plain MSE over all outputs (mean over batch and output dims)."""
    out, cache = net._forward_cached(x)
    err = out - y
    loss = float(np.mean(err ** 2))
    d_out = 2.0 * err / err.size
    g_w, g_b = net.backward(cache, d_out)
    return loss, g_w, g_b
