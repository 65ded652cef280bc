"""Neural network layers with hand-written reverse-mode gradients.

All arrays are float64; parameters live in one flat vector owned by a
ParameterStore, with each layer holding views into it. That makes the
optimizer, checkpointing and finite-difference checking trivial: perturb or
update the flat vector and every layer sees it.

Shapes are batched: Dense works on (B, n), the temporal layers on (B, T, C).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import DataError, NumericError


@dataclass
class ParamView:
    name: str
    kind: str
    shape: tuple[int, ...]
    offset: int
    size: int
    array: np.ndarray | None = None
    grad: np.ndarray | None = None


class ParameterStore:
    """Flat float64 parameter vector with named, layer-kind tagged views."""

    def __init__(self):
        self._views: list[ParamView] = []
        self.theta: np.ndarray | None = None
        self.grad: np.ndarray | None = None

    def register(self, name: str, kind: str, shape: tuple[int, ...]) -> ParamView:
        if self.theta is not None:
            raise NumericError("parameter store already allocated")
        size = int(np.prod(shape)) if shape else 1
        view = ParamView(name=name, kind=kind, shape=shape, offset=self.size, size=size)
        self._views.append(view)
        return view

    @property
    def size(self) -> int:
        return sum(v.size for v in self._views)

    @property
    def views(self) -> list[ParamView]:
        return list(self._views)

    def allocate(self) -> None:
        self.theta = np.zeros(self.size)
        self.grad = np.zeros(self.size)
        for view in self._views:
            view.array = self.theta[view.offset : view.offset + view.size].reshape(view.shape)
            view.grad = self.grad[view.offset : view.offset + view.size].reshape(view.shape)

    def zero_grad(self) -> None:
        self.grad[:] = 0.0

    def segments_by_kind(self) -> dict[str, list[tuple[int, int]]]:
        out: dict[str, list[tuple[int, int]]] = {}
        for view in self._views:
            out.setdefault(view.kind, []).append((view.offset, view.offset + view.size))
        return out


def glorot_uniform(rng: np.random.Generator, shape: tuple[int, ...], fan_in: int, fan_out: int) -> np.ndarray:
    limit = math.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=shape)


def sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


class Dense:
    """y = activation(x @ W.T + b); W is (out, in)."""

    kind = "dense"

    def __init__(self, store: ParameterStore, name: str, n_in: int, n_out: int, activation: str = "identity"):
        if n_in <= 0 or n_out <= 0:
            raise DataError(f"{name}: layer sizes must be positive")
        self.n_in, self.n_out = n_in, n_out
        self.activation = activation
        self.w = store.register(f"{name}.w", self.kind, (n_out, n_in))
        self.b = store.register(f"{name}.b", self.kind, (n_out,))
        self._x = None
        self._pre = None

    def init_params(self, rng: np.random.Generator) -> None:
        self.w.array[:] = glorot_uniform(rng, self.w.shape, self.n_in, self.n_out)
        self.b.array[:] = 0.0

    def forward(self, x: np.ndarray) -> np.ndarray:
        if x.shape[-1] != self.n_in:
            raise DataError(f"dense input dim {x.shape[-1]} != {self.n_in}")
        pre = x @ self.w.array.T + self.b.array
        self._x, self._pre = x, pre
        return apply_activation(pre, self.activation)

    def backward(self, dy: np.ndarray) -> np.ndarray:
        dpre = dy * activation_grad(self._pre, self.activation)
        self.w.grad += dpre.T @ self._x
        self.b.grad += dpre.sum(axis=0)
        return dpre @ self.w.array


def apply_activation(x: np.ndarray, name: str) -> np.ndarray:
    if name == "identity":
        return x
    if name == "relu":
        return np.maximum(x, 0.0)
    if name == "tanh":
        return np.tanh(x)
    if name == "sigmoid":
        return sigmoid(x)
    raise DataError(f"unknown activation {name!r}")


def activation_grad(pre: np.ndarray, name: str) -> np.ndarray:
    if name == "identity":
        return np.ones_like(pre)
    if name == "relu":
        return (pre > 0).astype(float)
    if name == "tanh":
        t = np.tanh(pre)
        return 1.0 - t * t
    if name == "sigmoid":
        s = sigmoid(pre)
        return s * (1.0 - s)
    raise DataError(f"unknown activation {name!r}")


class Conv1d:
    """Valid 1-D convolution over (B, T, C) with kernels (F, w, C).

    Inputs shorter than the kernel are zero-padded up to the kernel width.
    """

    kind = "conv1d"

    def __init__(self, store: ParameterStore, name: str, channels: int, filters: int, width: int):
        if channels <= 0 or filters <= 0 or width <= 0:
            raise DataError(f"{name}: conv sizes must be positive")
        self.channels, self.filters, self.width = channels, filters, width
        self.k = store.register(f"{name}.k", self.kind, (filters, width, channels))
        self.b = store.register(f"{name}.b", self.kind, (filters,))
        self._x = None

    def init_params(self, rng: np.random.Generator) -> None:
        fan_in = self.width * self.channels
        self.k.array[:] = glorot_uniform(rng, self.k.shape, fan_in, self.filters)
        self.b.array[:] = 0.0

    def forward(self, x: np.ndarray) -> np.ndarray:
        if x.shape[-1] != self.channels:
            raise DataError(f"conv input channels {x.shape[-1]} != {self.channels}")
        if x.shape[1] < self.width:
            pad = self.width - x.shape[1]
            x = np.concatenate([x, np.zeros((x.shape[0], pad, x.shape[2]))], axis=1)
        self._x = x
        t_out = x.shape[1] - self.width + 1
        out = np.zeros((x.shape[0], t_out, self.filters))
        for i in range(self.width):
            out += x[:, i : i + t_out, :] @ self.k.array[:, i, :].T
        return out + self.b.array

    def backward(self, dy: np.ndarray) -> np.ndarray:
        x = self._x
        t_out = dy.shape[1]
        dx = np.zeros_like(x)
        for i in range(self.width):
            self.k.grad[:, i, :] += np.einsum("btf,btc->fc", dy, x[:, i : i + t_out, :])
            dx[:, i : i + t_out, :] += dy @ self.k.array[:, i, :]
        self.b.grad += dy.sum(axis=(0, 1))
        return dx


class GlobalMaxPool1d:
    """Max over time per filter; gradient routes to the first argmax."""

    kind = "maxpool"

    def __init__(self):
        self._argmax = None
        self._shape = None

    def forward(self, x: np.ndarray) -> np.ndarray:
        self._argmax = np.argmax(x, axis=1)  # first maximum wins ties
        self._shape = x.shape
        return np.max(x, axis=1)

    def backward(self, dy: np.ndarray) -> np.ndarray:
        b, t, f = self._shape
        dx = np.zeros(self._shape)
        bi = np.repeat(np.arange(b), f)
        fi = np.tile(np.arange(f), b)
        dx[bi, self._argmax.ravel(), fi] = dy.ravel()
        return dx


class Relu:
    kind = "relu"

    def __init__(self):
        self._mask = None

    def forward(self, x: np.ndarray) -> np.ndarray:
        self._mask = x > 0
        return np.maximum(x, 0.0)

    def backward(self, dy: np.ndarray) -> np.ndarray:
        return dy * self._mask


class Lstm:
    """Single-layer LSTM over (B, T, C); returns the final hidden state.

    Gate order is [input, forget, cell, output]; zero initial state; the
    forget-gate bias initializes to one.
    """

    kind = "lstm"

    def __init__(self, store: ParameterStore, name: str, channels: int, hidden: int):
        if channels <= 0 or hidden <= 0:
            raise DataError(f"{name}: lstm sizes must be positive")
        self.channels, self.hidden = channels, hidden
        self.wx = store.register(f"{name}.wx", self.kind, (4 * hidden, channels))
        self.wh = store.register(f"{name}.wh", self.kind, (4 * hidden, hidden))
        self.b = store.register(f"{name}.b", self.kind, (4 * hidden,))
        self._cache = None

    def init_params(self, rng: np.random.Generator) -> None:
        self.wx.array[:] = glorot_uniform(rng, self.wx.shape, self.channels, self.hidden)
        self.wh.array[:] = glorot_uniform(rng, self.wh.shape, self.hidden, self.hidden)
        self.b.array[:] = 0.0
        self.b.array[self.hidden : 2 * self.hidden] = 1.0

    def forward(self, x: np.ndarray) -> np.ndarray:
        if x.shape[-1] != self.channels:
            raise DataError(f"lstm input channels {x.shape[-1]} != {self.channels}")
        batch, steps, _ = x.shape
        h = np.zeros((batch, self.hidden))
        c = np.zeros((batch, self.hidden))
        cache = []
        hn = self.hidden
        for t in range(steps):
            gates = x[:, t, :] @ self.wx.array.T + h @ self.wh.array.T + self.b.array
            i = sigmoid(gates[:, :hn])
            f = sigmoid(gates[:, hn : 2 * hn])
            g = np.tanh(gates[:, 2 * hn : 3 * hn])
            o = sigmoid(gates[:, 3 * hn :])
            c_new = f * c + i * g
            tanh_c = np.tanh(c_new)
            h_new = o * tanh_c
            cache.append((x[:, t, :], h, c, i, f, g, o, tanh_c))
            h, c = h_new, c_new
        self._cache = (cache, x.shape)
        return h

    def backward(self, dh_last: np.ndarray) -> np.ndarray:
        cache, x_shape = self._cache
        dx = np.zeros(x_shape)
        dh = dh_last
        dc = np.zeros_like(dh_last)
        for t in range(len(cache) - 1, -1, -1):
            x_t, h_prev, c_prev, i, f, g, o, tanh_c = cache[t]
            do = dh * tanh_c
            dc = dc + dh * o * (1.0 - tanh_c * tanh_c)
            di = dc * g
            df = dc * c_prev
            dg = dc * i
            d_gates = np.concatenate(
                [
                    di * i * (1.0 - i),
                    df * f * (1.0 - f),
                    dg * (1.0 - g * g),
                    do * o * (1.0 - o),
                ],
                axis=1,
            )
            self.wx.grad += d_gates.T @ x_t
            self.wh.grad += d_gates.T @ h_prev
            self.b.grad += d_gates.sum(axis=0)
            dx[:, t, :] = d_gates @ self.wx.array
            dh = d_gates @ self.wh.array
            dc = dc * f
        return dx


class Dropout:
    """Inverted dropout; identity outside training mode."""

    kind = "dropout"

    def __init__(self, rate: float):
        if not 0.0 <= rate < 1.0:
            raise DataError(f"dropout rate must be in [0,1), got {rate}")
        self.rate = rate
        self._mask = None

    def forward(self, x: np.ndarray, train: bool, rng: np.random.Generator | None = None) -> np.ndarray:
        if not train or self.rate == 0.0:
            self._mask = None
            return x
        if rng is None:
            raise NumericError("training-mode dropout needs an rng")
        self._mask = (rng.random(x.shape) >= self.rate) / (1.0 - self.rate)
        return x * self._mask

    def backward(self, dy: np.ndarray) -> np.ndarray:
        if self._mask is None:
            return dy
        return dy * self._mask


class Embedding:
    """Trainable lookup table: integer ids (B, L) -> vectors (B, L, dim)."""

    kind = "embedding"

    def __init__(self, store: ParameterStore, name: str, vocab: int, dim: int):
        if vocab <= 0 or dim <= 0:
            raise DataError(f"{name}: embedding sizes must be positive")
        self.vocab, self.dim = vocab, dim
        self.table = store.register(f"{name}.table", self.kind, (vocab, dim))
        self._ids = None

    def init_params(self, rng: np.random.Generator) -> None:
        self.table.array[:] = glorot_uniform(rng, self.table.shape, self.vocab, self.dim)

    def forward(self, ids: np.ndarray) -> np.ndarray:
        if ids.min() < 0 or ids.max() >= self.vocab:
            raise DataError("embedding id out of range")
        self._ids = ids
        return self.table.array[ids]

    def backward(self, dy: np.ndarray) -> None:
        np.add.at(self.table.grad, self._ids, dy)
        return None


def concat(parts: list[np.ndarray]) -> tuple[np.ndarray, list[int]]:
    widths = [p.shape[1] for p in parts]
    return np.concatenate(parts, axis=1), widths


def split_grad(dy: np.ndarray, widths: list[int]) -> list[np.ndarray]:
    out = []
    at = 0
    for width in widths:
        out.append(dy[:, at : at + width])
        at += width
    return out
