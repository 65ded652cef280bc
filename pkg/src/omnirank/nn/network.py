"""The assembled five-branch fusion network and its training loop.

Branches: dense stack over static numerics (+ graph features), conv+maxpool
over the categorical one-hot rows, an LSTM over the index series, and
LSTM-parallel-conv combos over the news and comment channel matrices. Three
pairwise fusion layers consume concatenated branch outputs, pairing
(static numeric, static categorical), (static numeric, index) and
(news, comments), and the head concatenates everything into a dense hidden layer, dropout and
a sigmoid scoring unit.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, asdict

import numpy as np

from ..domain import FeatureBundle, RiskScore
from ..errors import ConfigError, DataError, NumericError
from ..seeding import derive_rng
from .layers import (
    Conv1d,
    Dense,
    Dropout,
    GlobalMaxPool1d,
    Lstm,
    ParameterStore,
    Relu,
    concat,
    sigmoid,
    split_grad,
)


@dataclass(frozen=True)
class NetworkConfig:
    branch_dim: int = 16
    fusion_dim: int = 16
    hidden_dim: int = 64
    lstm_hidden: int = 16
    conv_filters: int = 16
    conv_width: int = 3
    dropout: float = 0.3
    embedding_dim: int = 32  # available to token-id branches; unused by default wiring
    seed: int = 0


@dataclass(frozen=True)
class BranchDims:
    """Input dimensionality of the five feature branches."""

    static_num: int  # numeric vector length incl. graph features
    cat_fields: int
    cat_vocab: int
    window: int
    index_channels: int
    news_channels: int
    comment_channels: int

    def validate(self) -> None:
        for name, value in asdict(self).items():
            if value <= 0:
                raise ConfigError(f"branch dim {name} must be positive, got {value}")


@dataclass(frozen=True)
class TrainConfig:
    optimizer: str = "adam"  # "adam" or "sgd"
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    epochs: int = 60
    batch_size: int = 32
    seed: int = 0
    patience: int = 0  # early stop on validation loss; 0 disables
    val_fraction: float = 0.15  # held out only when patience > 0

    def validate(self) -> None:
        if self.learning_rate <= 0:
            raise ConfigError("learning rate must be positive")
        if self.optimizer not in ("adam", "sgd"):
            raise ConfigError(f"unknown optimizer {self.optimizer!r}")
        if not 0.0 <= self.val_fraction < 1.0:
            raise ConfigError("val_fraction must be in [0,1)")


class OmniRankNet:
    """Five-branch fusion network mapping feature bundles to scores in [0,1]."""

    def __init__(self, dims: BranchDims, config: NetworkConfig = NetworkConfig()):
        dims.validate()
        self.dims = dims
        self.config = config
        store = ParameterStore()
        bd, fd = config.branch_dim, config.fusion_dim

        self.static_dense1 = Dense(store, "static.dense1", dims.static_num, bd, "relu")
        self.static_dense2 = Dense(store, "static.dense2", bd, bd, "relu")

        self.cat_conv = Conv1d(store, "cat.conv", dims.cat_vocab, config.conv_filters, config.conv_width)
        self.cat_relu = Relu()
        self.cat_pool = GlobalMaxPool1d()

        self.index_lstm = Lstm(store, "index.lstm", dims.index_channels, config.lstm_hidden)

        self.news_lstm = Lstm(store, "news.lstm", dims.news_channels, config.lstm_hidden)
        self.news_conv = Conv1d(store, "news.conv", dims.news_channels, config.conv_filters, config.conv_width)
        self.news_relu = Relu()
        self.news_pool = GlobalMaxPool1d()

        self.comment_lstm = Lstm(store, "comment.lstm", dims.comment_channels, config.lstm_hidden)
        self.comment_conv = Conv1d(
            store, "comment.conv", dims.comment_channels, config.conv_filters, config.conv_width
        )
        self.comment_relu = Relu()
        self.comment_pool = GlobalMaxPool1d()

        text_dim = config.lstm_hidden + config.conv_filters
        self.fuse_static = Dense(store, "fusion.static_pair", bd + config.conv_filters, fd, "relu")
        self.fuse_index = Dense(store, "fusion.index_pair", bd + config.lstm_hidden, fd, "relu")
        self.fuse_text = Dense(store, "fusion.text_pair", 2 * text_dim, fd, "relu")

        head_in = bd + config.conv_filters + config.lstm_hidden + 2 * text_dim + 3 * fd
        self.head_dense = Dense(store, "head.dense", head_in, config.hidden_dim, "relu")
        self.head_dropout = Dropout(config.dropout)
        self.head_out = Dense(store, "head.out", config.hidden_dim, 1, "identity")

        self.store = store
        store.allocate()
        init_rng = derive_rng(config.seed, "init")
        for layer in self._param_layers():
            layer.init_params(init_rng)

    def _param_layers(self):
        return [
            self.static_dense1,
            self.static_dense2,
            self.cat_conv,
            self.index_lstm,
            self.news_lstm,
            self.news_conv,
            self.comment_lstm,
            self.comment_conv,
            self.fuse_static,
            self.fuse_index,
            self.fuse_text,
            self.head_dense,
            self.head_out,
        ]

    def forward(
        self, batch: dict[str, np.ndarray], train: bool = False, rng: np.random.Generator | None = None
    ) -> np.ndarray:
        """Scores in (0,1) for a batch dict; returns shape (B,)."""
        logits = self.forward_logits(batch, train=train, rng=rng)
        return sigmoid(logits)

    def forward_logits(
        self, batch: dict[str, np.ndarray], train: bool = False, rng: np.random.Generator | None = None
    ) -> np.ndarray:
        static_out = self.static_dense2.forward(self.static_dense1.forward(batch["static"]))
        cat_out = self.cat_pool.forward(self.cat_relu.forward(self.cat_conv.forward(batch["cat"])))
        index_out = self.index_lstm.forward(batch["index"])
        news_out, self._news_widths = concat(
            [
                self.news_lstm.forward(batch["news"]),
                self.news_pool.forward(self.news_relu.forward(self.news_conv.forward(batch["news"]))),
            ]
        )
        comment_out, self._comment_widths = concat(
            [
                self.comment_lstm.forward(batch["comment"]),
                self.comment_pool.forward(
                    self.comment_relu.forward(self.comment_conv.forward(batch["comment"]))
                ),
            ]
        )
        fuse_static_in, self._fs_widths = concat([static_out, cat_out])
        fuse_index_in, self._fi_widths = concat([static_out, index_out])
        fuse_text_in, self._ft_widths = concat([news_out, comment_out])
        fused_static = self.fuse_static.forward(fuse_static_in)
        fused_index = self.fuse_index.forward(fuse_index_in)
        fused_text = self.fuse_text.forward(fuse_text_in)
        head_in, self._head_widths = concat(
            [static_out, cat_out, index_out, news_out, comment_out, fused_static, fused_index, fused_text]
        )
        hidden = self.head_dense.forward(head_in)
        hidden = self.head_dropout.forward(hidden, train=train, rng=rng)
        return self.head_out.forward(hidden)[:, 0]

    def backward_logits(self, dlogits: np.ndarray) -> None:
        """Backprop from d(loss)/d(logit); accumulates into store.grad."""
        dy = self.head_out.backward(dlogits[:, None])
        dy = self.head_dropout.backward(dy)
        d_head_in = self.head_dense.backward(dy)
        (
            d_static,
            d_cat,
            d_index,
            d_news,
            d_comment,
            d_fused_static,
            d_fused_index,
            d_fused_text,
        ) = split_grad(d_head_in, self._head_widths)

        d_fs_in = self.fuse_static.backward(d_fused_static)
        d_fi_in = self.fuse_index.backward(d_fused_index)
        d_ft_in = self.fuse_text.backward(d_fused_text)
        d_static_fs, d_cat_fs = split_grad(d_fs_in, self._fs_widths)
        d_static_fi, d_index_fi = split_grad(d_fi_in, self._fi_widths)
        d_news_ft, d_comment_ft = split_grad(d_ft_in, self._ft_widths)

        d_static = d_static + d_static_fs + d_static_fi
        d_cat = d_cat + d_cat_fs
        d_index = d_index + d_index_fi
        d_news = d_news + d_news_ft
        d_comment = d_comment + d_comment_ft

        d_news_lstm, d_news_conv = split_grad(d_news, self._news_widths)
        d_comment_lstm, d_comment_conv = split_grad(d_comment, self._comment_widths)

        self.news_lstm.backward(d_news_lstm)
        self.news_conv.backward(self.news_relu.backward(self.news_pool.backward(d_news_conv)))
        self.comment_lstm.backward(d_comment_lstm)
        self.comment_conv.backward(
            self.comment_relu.backward(self.comment_pool.backward(d_comment_conv))
        )
        self.index_lstm.backward(d_index)
        self.cat_conv.backward(self.cat_relu.backward(self.cat_pool.backward(d_cat)))
        self.static_dense1.backward(self.static_dense2.backward(d_static))

    # --- loss -------------------------------------------------------------

    def loss(self, batch: dict[str, np.ndarray], labels: np.ndarray, train: bool = False,
             rng: np.random.Generator | None = None) -> float:
        logits = self.forward_logits(batch, train=train, rng=rng)
        return float(np.mean(bce_from_logits(logits, labels)))

    def loss_and_grad(
        self, batch: dict[str, np.ndarray], labels: np.ndarray, train: bool = False,
        rng: np.random.Generator | None = None
    ) -> float:
        self.store.zero_grad()
        logits = self.forward_logits(batch, train=train, rng=rng)
        loss = float(np.mean(bce_from_logits(logits, labels)))
        dlogits = (sigmoid(logits) - labels) / labels.shape[0]
        self.backward_logits(dlogits)
        return loss


def bce_from_logits(logits: np.ndarray, labels: np.ndarray) -> np.ndarray:
    # log(1+e^z) computed stably for both signs of z
    return np.maximum(logits, 0.0) - logits * labels + np.log1p(np.exp(-np.abs(logits)))


def bundles_to_batch(bundles: list[FeatureBundle]) -> tuple[dict[str, np.ndarray], np.ndarray]:
    if not bundles:
        raise DataError("no bundles supplied")
    batch = {
        "static": np.stack([np.concatenate([b.x_s_num, b.kg_vec]) for b in bundles]),
        "cat": np.stack([b.x_s_cat for b in bundles]),
        "index": np.stack([b.x_di for b in bundles]),
        "news": np.stack([b.x_dn for b in bundles]),
        "comment": np.stack([b.x_dc for b in bundles]),
    }
    labels = np.array([float(b.label_at_cutoff) for b in bundles])
    return batch, labels


def dims_from_bundles(bundles: list[FeatureBundle]) -> BranchDims:
    b = bundles[0]
    return BranchDims(
        static_num=b.x_s_num.shape[0] + b.kg_vec.shape[0],
        cat_fields=b.x_s_cat.shape[0],
        cat_vocab=b.x_s_cat.shape[1],
        window=b.x_di.shape[0],
        index_channels=b.x_di.shape[1],
        news_channels=b.x_dn.shape[1],
        comment_channels=b.x_dc.shape[1],
    )


def build_omnirank(dims: BranchDims, config: NetworkConfig = NetworkConfig()) -> OmniRankNet:
    return OmniRankNet(dims, config)


class Adam:
    def __init__(self, size: int, lr: float, beta1: float, beta2: float, epsilon: float):
        self.lr, self.beta1, self.beta2, self.epsilon = lr, beta1, beta2, epsilon
        self.m = np.zeros(size)
        self.v = np.zeros(size)
        self.t = 0

    def step(self, theta: np.ndarray, grad: np.ndarray) -> None:
        self.t += 1
        self.m = self.beta1 * self.m + (1 - self.beta1) * grad
        self.v = self.beta2 * self.v + (1 - self.beta2) * grad * grad
        m_hat = self.m / (1 - self.beta1**self.t)
        v_hat = self.v / (1 - self.beta2**self.t)
        theta -= self.lr * m_hat / (np.sqrt(v_hat) + self.epsilon)


class Sgd:
    def __init__(self, size: int, lr: float):
        self.lr = lr

    def step(self, theta: np.ndarray, grad: np.ndarray) -> None:
        theta -= self.lr * grad


@dataclass
class TrainHistory:
    train_loss: list[float] = field(default_factory=list)
    val_loss: list[float] = field(default_factory=list)
    stopped_epoch: int | None = None


def train(model: OmniRankNet, bundles: list[FeatureBundle], config: TrainConfig) -> TrainHistory:
    """Mini-batch training on binary cross-entropy (Normal -> 1, Problem -> 0)."""
    config.validate()
    if not bundles:
        raise DataError("cannot train on an empty bundle list")
    history = TrainHistory()
    if config.epochs == 0:
        return history

    order_rng = derive_rng(config.seed, "batch-order")
    dropout_rng = derive_rng(config.seed, "dropout")

    bundles = list(bundles)
    n_val = int(len(bundles) * config.val_fraction) if config.patience > 0 else 0
    if n_val > 0:
        idx = order_rng.permutation(len(bundles))
        val_set = [bundles[i] for i in idx[:n_val]]
        train_set = [bundles[i] for i in idx[n_val:]]
    else:
        val_set, train_set = [], bundles
    if not train_set:
        raise DataError("validation split left no training data")

    batch_all, labels_all = bundles_to_batch(train_set)
    val_batch, val_labels = bundles_to_batch(val_set) if val_set else (None, None)

    if config.optimizer == "adam":
        opt = Adam(model.store.size, config.learning_rate, config.beta1, config.beta2, config.epsilon)
    else:
        opt = Sgd(model.store.size, config.learning_rate)

    best_val = np.inf
    best_theta = None
    bad_epochs = 0
    n = len(train_set)
    for epoch in range(config.epochs):
        perm = order_rng.permutation(n)
        epoch_loss = 0.0
        for start in range(0, n, config.batch_size):
            take = perm[start : start + config.batch_size]
            batch = {key: value[take] for key, value in batch_all.items()}
            loss = model.loss_and_grad(batch, labels_all[take], train=True, rng=dropout_rng)
            if not np.isfinite(loss):
                raise NumericError(
                    f"non-finite training loss at epoch {epoch}, batch offset {start}"
                )
            opt.step(model.store.theta, model.store.grad)
            epoch_loss += loss * len(take)
        history.train_loss.append(epoch_loss / n)

        if val_set:
            val_loss = model.loss(val_batch, val_labels, train=False)
            history.val_loss.append(val_loss)
            if val_loss < best_val - 1e-6:
                best_val = val_loss
                best_theta = model.store.theta.copy()
                bad_epochs = 0
            else:
                bad_epochs += 1
                if config.patience and bad_epochs >= config.patience:
                    history.stopped_epoch = epoch
                    break
    if best_theta is not None:
        model.store.theta[:] = best_theta
    return history


def predict_scores(model: OmniRankNet, bundles: list[FeatureBundle]) -> list[RiskScore]:
    """Pure forward pass with dropout off; one score per bundle."""
    batch, _ = bundles_to_batch(bundles)
    scores = model.forward(batch, train=False)
    return [
        RiskScore(platform_id=b.platform_id, cutoff_month=b.cutoff_month, score=float(s))
        for b, s in zip(bundles, scores)
    ]


def save_checkpoint(out_dir: str, model: OmniRankNet) -> None:
    """JSON manifest plus a little-endian float64 parameter blob."""
    os.makedirs(out_dir, exist_ok=True)
    manifest = {
        "schema_version": 1,
        "dims": asdict(model.dims),
        "network": asdict(model.config),
        "param_count": int(model.store.size),
    }
    with open(os.path.join(out_dir, "manifest.json"), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, sort_keys=True, indent=2)
    model.store.theta.astype("<f8").tofile(os.path.join(out_dir, "params.bin"))


def load_checkpoint(model_dir: str) -> OmniRankNet:
    manifest_path = os.path.join(model_dir, "manifest.json")
    params_path = os.path.join(model_dir, "params.bin")
    if not (os.path.exists(manifest_path) and os.path.exists(params_path)):
        raise DataError(f"checkpoint incomplete in {model_dir}")
    with open(manifest_path, encoding="utf-8") as fh:
        manifest = json.load(fh)
    try:
        dims = BranchDims(**manifest["dims"])
        config = NetworkConfig(**manifest["network"])
        count = int(manifest["param_count"])
    except (KeyError, TypeError) as exc:
        raise DataError(f"malformed checkpoint manifest: {exc}") from exc
    model = OmniRankNet(dims, config)
    theta = np.fromfile(params_path, dtype="<f8")
    if theta.size != count or count != model.store.size:
        raise DataError(
            f"parameter blob size {theta.size} does not match manifest/model ({count}/{model.store.size})"
        )
    model.store.theta[:] = theta
    return model
