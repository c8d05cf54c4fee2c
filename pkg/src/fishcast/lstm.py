"""Single-layer LSTM with hand-written backpropagation through time.

The cell follows the gate equations

    i_t = sigmoid(W_i [x_t, h_{t-1}] + b_i)          input gate
    f_t = sigmoid(W_f [x_t, h_{t-1}] + b_f)          forget gate
    o_t = sigmoid(W_o [x_t, h_{t-1}] + b_o)          output gate
    c_t = tanh   (W_c [x_t, h_{t-1}] + b_c)          candidate memory
    m_t = f_t * m_{t-1} + i_t * c_t                  memory update
    h_t = tanh(o_t * m_t)                            hidden output

Note the last line: tanh is applied to the gated memory product, not to the
memory alone. That is the form this project standardises on; the more common
variant h_t = o_t * tanh(m_t) is available through the
``conventional_output`` flag for comparison runs.

A scalar linear readout maps the final hidden vector to a temperature.
Training is plain full-batch gradient descent on mean squared error with
exact BPTT gradients and global-norm clipping; no optimizer variants, no
mini-batches. Everything is deterministic given the seed.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass

import numpy as np

from .tdf import TdfConfig, build_features, make_dataset

__all__ = [
    "LstmParams",
    "LstmState",
    "Readout",
    "TrainConfig",
    "LstmGradients",
    "TrainingDivergedError",
    "BlockModel",
    "sigmoid",
    "lstm_step",
    "forward",
    "predict_batch",
    "mse_loss",
    "bptt_gradients",
    "clip_gradients",
    "train",
    "train_block",
    "forecast",
    "save_checkpoint",
    "load_checkpoint",
    "save_loss_history",
]

CHECKPOINT_FORMAT = "fishcast-lstm"
CHECKPOINT_VERSION = 1


class TrainingDivergedError(RuntimeError):
    """Raised when the training loss stops being finite."""

    def __init__(self, epoch: int):
        super().__init__(f"training diverged at epoch {epoch}: loss is not finite")
        self.epoch = epoch


def sigmoid(x):
    """Numerically stable logistic function, elementwise on arrays.

    Uses the exp of a non-positive argument on both branches so it never
    overflows, even for |x| around 700.
    """
    arr = np.asarray(x, dtype=float)
    out = np.empty_like(arr)
    pos = arr >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-arr[pos]))
    ex = np.exp(arr[~pos])
    out[~pos] = ex / (1.0 + ex)
    if np.isscalar(x) or np.ndim(x) == 0:
        return float(out)
    return out


@dataclass
class LstmParams:
    """Gate weights and biases. Each W has shape (hidden, input + hidden)."""

    w_i: np.ndarray
    w_f: np.ndarray
    w_o: np.ndarray
    w_c: np.ndarray
    b_i: np.ndarray
    b_f: np.ndarray
    b_o: np.ndarray
    b_c: np.ndarray
    conventional_output: bool = False

    def __post_init__(self) -> None:
        h, cols = self.w_i.shape
        for name in ("w_f", "w_o", "w_c"):
            if getattr(self, name).shape != (h, cols):
                raise ValueError(f"{name} shape {getattr(self, name).shape} != {(h, cols)}")
        for name in ("b_i", "b_f", "b_o", "b_c"):
            if getattr(self, name).shape != (h,):
                raise ValueError(f"{name} shape {getattr(self, name).shape} != {(h,)}")
        for name in ("w_i", "w_f", "w_o", "w_c", "b_i", "b_f", "b_o", "b_c"):
            if not np.all(np.isfinite(getattr(self, name))):
                raise ValueError(f"non-finite entries in {name}")

    @property
    def hidden_size(self) -> int:
        return self.w_i.shape[0]

    @property
    def input_size(self) -> int:
        return self.w_i.shape[1] - self.w_i.shape[0]

    @classmethod
    def zeros(cls, input_size: int, hidden_size: int,
              conventional_output: bool = False) -> "LstmParams":
        cols = input_size + hidden_size
        return cls(
            *(np.zeros((hidden_size, cols)) for _ in range(4)),
            *(np.zeros(hidden_size) for _ in range(4)),
            conventional_output=conventional_output,
        )

    @classmethod
    def random(cls, input_size: int, hidden_size: int, scale: float,
               rng: np.random.Generator,
               conventional_output: bool = False) -> "LstmParams":
        """Uniform [-scale, scale] initialisation from the given generator."""
        cols = input_size + hidden_size
        return cls(
            *(rng.uniform(-scale, scale, (hidden_size, cols)) for _ in range(4)),
            *(rng.uniform(-scale, scale, hidden_size) for _ in range(4)),
            conventional_output=conventional_output,
        )


@dataclass
class LstmState:
    """Memory vector and hidden output after a step."""

    memory: np.ndarray
    hidden: np.ndarray

    @classmethod
    def zero(cls, hidden_size: int) -> "LstmState":
        return cls(np.zeros(hidden_size), np.zeros(hidden_size))


@dataclass
class Readout:
    """Linear head mapping the final hidden vector to a scalar temperature."""

    weights: np.ndarray
    bias: float

    def __call__(self, hidden: np.ndarray) -> float:
        return float(hidden @ self.weights + self.bias)


@dataclass(frozen=True)
class TrainConfig:
    """Hyperparameters for full-batch gradient-descent training."""

    learning_rate: float = 0.1
    epochs: int = 8000
    clip: float = 5.0
    seed: int = 0
    init_scale: float = 0.1
    hidden_size: int = 16
    conventional_output: bool = False

    def __post_init__(self) -> None:
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be > 0")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.clip <= 0:
            raise ValueError("clip must be > 0")
        if self.hidden_size < 1:
            raise ValueError("hidden_size must be >= 1")


def lstm_step(params: LstmParams, x_t, prev: LstmState) -> LstmState:
    """Advance the cell by one time step."""
    x = np.atleast_1d(np.asarray(x_t, dtype=float))
    if x.shape != (params.input_size,):
        raise ValueError(f"input shape {x.shape} != ({params.input_size},)")
    if prev.hidden.shape != (params.hidden_size,) or prev.memory.shape != (params.hidden_size,):
        raise ValueError("previous state size does not match hidden_size")
    joint = np.concatenate([x, prev.hidden])
    gate_in = sigmoid(params.w_i @ joint + params.b_i)
    gate_forget = sigmoid(params.w_f @ joint + params.b_f)
    gate_out = sigmoid(params.w_o @ joint + params.b_o)
    candidate = np.tanh(params.w_c @ joint + params.b_c)
    memory = gate_forget * prev.memory + gate_in * candidate
    if params.conventional_output:
        hidden = gate_out * np.tanh(memory)
    else:
        hidden = np.tanh(gate_out * memory)
    return LstmState(memory, hidden)


# ---------------------------------------------------------------------------
# batched forward/backward over fixed-length feature sequences
#
# Sequences are fed one scalar per time step (input_size must be 1), all
# batch rows in lockstep. The caches produced by the forward pass carry
# exactly what the backward pass needs.


def _forward_batch(params: LstmParams, readout: Readout, feats: np.ndarray):
    """Run the net over a (batch, steps) feature matrix.

    Returns (predictions, caches); caches is a list with one entry per step.
    """
    if params.input_size != 1:
        raise ValueError("sequence forecasting feeds one scalar per step; input_size must be 1")
    batch, steps = feats.shape
    if steps < 1:
        raise ValueError("empty feature sequence")
    h = np.zeros((batch, params.hidden_size))
    m = np.zeros((batch, params.hidden_size))
    caches = []
    for t in range(steps):
        joint = np.concatenate([feats[:, t : t + 1], h], axis=1)
        gi = sigmoid(joint @ params.w_i.T + params.b_i)
        gf = sigmoid(joint @ params.w_f.T + params.b_f)
        go = sigmoid(joint @ params.w_o.T + params.b_o)
        cand = np.tanh(joint @ params.w_c.T + params.b_c)
        m_prev = m
        m = gf * m_prev + gi * cand
        if params.conventional_output:
            tanh_m = np.tanh(m)
            h = go * tanh_m
            caches.append((joint, gi, gf, go, cand, m_prev, m, h, tanh_m))
        else:
            h = np.tanh(go * m)
            caches.append((joint, gi, gf, go, cand, m_prev, m, h, None))
    preds = h @ readout.weights + readout.bias
    return preds, caches


def predict_batch(params: LstmParams, readout: Readout, feats: np.ndarray) -> np.ndarray:
    """Predictions for a (batch, steps) feature matrix."""
    preds, _ = _forward_batch(params, readout, np.asarray(feats, dtype=float))
    return preds


def forward(params: LstmParams, readout: Readout, features) -> float:
    """Prediction for a single feature vector, fed one entry per step."""
    feats = np.asarray(features, dtype=float).reshape(1, -1)
    if feats.size == 0:
        raise ValueError("empty feature vector")
    preds, _ = _forward_batch(params, readout, feats)
    return float(preds[0])


def mse_loss(predictions, targets) -> float:
    """Mean of squared differences."""
    p = np.asarray(predictions, dtype=float)
    t = np.asarray(targets, dtype=float)
    if p.shape != t.shape or p.size == 0:
        raise ValueError(f"length mismatch or empty: {p.shape} vs {t.shape}")
    return float(np.mean((p - t) ** 2))


@dataclass
class LstmGradients:
    """Gradients for every weight, bias, and readout entry."""

    w_i: np.ndarray
    w_f: np.ndarray
    w_o: np.ndarray
    w_c: np.ndarray
    b_i: np.ndarray
    b_f: np.ndarray
    b_o: np.ndarray
    b_c: np.ndarray
    readout_weights: np.ndarray
    readout_bias: float

    _BLOCKS = ("w_i", "w_f", "w_o", "w_c", "b_i", "b_f", "b_o", "b_c",
               "readout_weights", "readout_bias")

    def blocks(self):
        for name in self._BLOCKS:
            yield name, getattr(self, name)

    def global_norm(self) -> float:
        total = 0.0
        for _, block in self.blocks():
            total += float(np.sum(np.square(block)))
        return math.sqrt(total)

    def scaled(self, factor: float) -> "LstmGradients":
        return LstmGradients(
            *(np.asarray(getattr(self, n)) * factor for n in self._BLOCKS[:-1]),
            self.readout_bias * factor,
        )

    def check_finite(self) -> None:
        for name, block in self.blocks():
            if not np.all(np.isfinite(block)):
                raise FloatingPointError(f"non-finite gradient in block '{name}'")


def clip_gradients(grads: LstmGradients, max_norm: float) -> LstmGradients:
    """Scale gradients down if their global norm exceeds ``max_norm``."""
    if max_norm <= 0:
        raise ValueError("max_norm must be > 0")
    norm = grads.global_norm()
    if norm > max_norm:
        return grads.scaled(max_norm / norm)
    return grads


def _loss_and_gradients(params: LstmParams, readout: Readout,
                        feats: np.ndarray, targets: np.ndarray):
    """Full-batch MSE loss and its exact gradients, unrolled over all steps."""
    batch, _ = feats.shape
    preds, caches = _forward_batch(params, readout, feats)
    residual = preds - targets
    loss = float(np.mean(residual**2))

    dpred = 2.0 * residual / batch
    h_last = caches[-1][7]
    g_read_w = h_last.T @ dpred
    g_read_b = float(np.sum(dpred))
    dh = dpred[:, None] * readout.weights[None, :]

    hid = params.hidden_size
    g_w = {n: np.zeros_like(getattr(params, n)) for n in ("w_i", "w_f", "w_o", "w_c")}
    g_b = {n: np.zeros_like(getattr(params, n)) for n in ("b_i", "b_f", "b_o", "b_c")}
    dm_carry = np.zeros((batch, hid))

    for t in range(len(caches) - 1, -1, -1):
        joint, gi, gf, go, cand, m_prev, m, h, tanh_m = caches[t]
        if params.conventional_output:
            dgo = dh * tanh_m
            dm = dm_carry + dh * go * (1.0 - tanh_m**2)
        else:
            dz = dh * (1.0 - h**2)  # z = go * m, h = tanh(z)
            dgo = dz * m
            dm = dm_carry + dz * go
        dgi = dm * cand
        dcand = dm * gi
        dgf = dm * m_prev
        dm_carry = dm * gf

        da_i = dgi * gi * (1.0 - gi)
        da_f = dgf * gf * (1.0 - gf)
        da_o = dgo * go * (1.0 - go)
        da_c = dcand * (1.0 - cand**2)

        g_w["w_i"] += da_i.T @ joint
        g_w["w_f"] += da_f.T @ joint
        g_w["w_o"] += da_o.T @ joint
        g_w["w_c"] += da_c.T @ joint
        g_b["b_i"] += da_i.sum(axis=0)
        g_b["b_f"] += da_f.sum(axis=0)
        g_b["b_o"] += da_o.sum(axis=0)
        g_b["b_c"] += da_c.sum(axis=0)

        djoint = da_i @ params.w_i + da_f @ params.w_f + da_o @ params.w_o + da_c @ params.w_c
        dh = djoint[:, 1:]

    grads = LstmGradients(
        g_w["w_i"], g_w["w_f"], g_w["w_o"], g_w["w_c"],
        g_b["b_i"], g_b["b_f"], g_b["b_o"], g_b["b_c"],
        g_read_w, g_read_b,
    )
    return loss, grads


def _stack_pairs(batch) -> tuple[np.ndarray, np.ndarray]:
    pairs = list(batch)
    if not pairs:
        raise ValueError("empty batch")
    feats = np.stack([np.asarray(p.features, dtype=float) for p in pairs])
    targets = np.array([p.target for p in pairs], dtype=float)
    return feats, targets


def bptt_gradients(params: LstmParams, readout: Readout, batch,
                   clip: float | None = None) -> LstmGradients:
    """Exact gradients of the batch MSE with respect to every parameter.

    Pass ``clip`` to apply global-norm clipping after the computation, as
    the training loop does.
    """
    feats, targets = _stack_pairs(batch)
    _, grads = _loss_and_gradients(params, readout, feats, targets)
    grads.check_finite()
    if clip is not None:
        grads = clip_gradients(grads, clip)
    return grads


def train(dataset, config: TrainConfig) -> tuple[LstmParams, Readout, list[float]]:
    """Full-batch gradient descent for the configured number of epochs.

    Returns the trained parameters, readout, and the per-epoch loss history
    (loss measured before each update). Deterministic given ``config.seed``.
    """
    feats, targets = _stack_pairs(dataset)
    rng = np.random.default_rng(config.seed)
    params = LstmParams.random(1, config.hidden_size, config.init_scale, rng,
                               conventional_output=config.conventional_output)
    readout = Readout(
        rng.uniform(-config.init_scale, config.init_scale, config.hidden_size),
        float(rng.uniform(-config.init_scale, config.init_scale)),
    )
    history: list[float] = []
    lr = config.learning_rate
    for epoch in range(config.epochs):
        loss, grads = _loss_and_gradients(params, readout, feats, targets)
        if not math.isfinite(loss):
            raise TrainingDivergedError(epoch)
        grads.check_finite()
        history.append(loss)
        grads = clip_gradients(grads, config.clip)
        for name in ("w_i", "w_f", "w_o", "w_c", "b_i", "b_f", "b_o", "b_c"):
            block = getattr(params, name)
            block -= lr * getattr(grads, name)
        readout.weights -= lr * grads.readout_weights
        readout.bias = float(readout.bias - lr * grads.readout_bias)
    return params, readout, history


def forecast(params: LstmParams, readout: Readout, series, config: TdfConfig,
             horizon: int) -> np.ndarray:
    """Rolling multi-step forecast.

    Each prediction is appended to the series and becomes history for the
    next step, so errors compound the way they would in production use.
    """
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    work = list(np.asarray(series, dtype=float))
    if len(work) < config.lookback:
        raise ValueError(
            f"series of length {len(work)} too short for lookback {config.lookback}"
        )
    out = []
    for _ in range(horizon):
        feats = build_features(work, len(work), config)
        pred = forward(params, readout, feats)
        work.append(pred)
        out.append(pred)
    return np.array(out)


# ---------------------------------------------------------------------------
# per-block models
#
# Temperatures sit around 10 degC while the structure worth learning spans
# well under one degree, which leaves plain gradient descent crawling along
# a badly conditioned loss surface. Each block model therefore standardises
# its own series (z-score against the training data) and trains the net in
# scaled space; predictions are mapped back to degrees on the way out.


@dataclass
class BlockModel:
    """A trained forecaster for one grid block: net plus series scaling."""

    params: LstmParams
    readout: Readout
    center: float = 0.0
    scale: float = 1.0

    def predict(self, features) -> float:
        """One-step prediction in degrees C from raw-series features."""
        scaled = (np.asarray(features, dtype=float) - self.center) / self.scale
        return forward(self.params, self.readout, scaled) * self.scale + self.center

    def forecast(self, series, config: TdfConfig, horizon: int) -> np.ndarray:
        """Rolling forecast in degrees C."""
        scaled = (np.asarray(series, dtype=float) - self.center) / self.scale
        out = forecast(self.params, self.readout, scaled, config, horizon)
        return out * self.scale + self.center

    def save(self, path, meta: dict | None = None) -> None:
        merged = dict(meta or {})
        merged["scaler"] = {"center": self.center, "scale": self.scale}
        save_checkpoint(path, self.params, self.readout, merged)

    @classmethod
    def load(cls, path) -> "BlockModel":
        params, readout, meta = load_checkpoint(path)
        scaler = meta.get("scaler", {})
        return cls(params, readout,
                   float(scaler.get("center", 0.0)), float(scaler.get("scale", 1.0)))


def train_block(series, tdf_config: TdfConfig, train_config: TrainConfig,
                standardize: bool = True) -> tuple[BlockModel, list[float]]:
    """Train a block forecaster on its temperature series.

    The loss history is in scaled units when ``standardize`` is on.
    """
    arr = np.asarray(series, dtype=float)
    center, scale = 0.0, 1.0
    if standardize:
        center = float(arr.mean())
        spread = float(arr.std())
        if spread > 0:
            scale = spread
    from .tdf import make_dataset

    dataset = make_dataset((arr - center) / scale, tdf_config)
    params, readout, history = train(dataset, train_config)
    return BlockModel(params, readout, center, scale), history


# ---------------------------------------------------------------------------
# checkpoint and history files


def save_checkpoint(path, params: LstmParams, readout: Readout,
                    meta: dict | None = None) -> None:
    """Serialise a trained model to a versioned JSON checkpoint."""
    doc = {
        "format": CHECKPOINT_FORMAT,
        "version": CHECKPOINT_VERSION,
        "hidden_size": params.hidden_size,
        "input_size": params.input_size,
        "conventional_output": params.conventional_output,
        "weights": {n: getattr(params, n).tolist()
                    for n in ("w_i", "w_f", "w_o", "w_c")},
        "biases": {n: getattr(params, n).tolist()
                   for n in ("b_i", "b_f", "b_o", "b_c")},
        "readout": {"weights": readout.weights.tolist(), "bias": readout.bias},
        "meta": meta or {},
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_checkpoint(path) -> tuple[LstmParams, Readout, dict]:
    """Load a checkpoint written by :func:`save_checkpoint`."""
    with open(path) as fh:
        doc = json.load(fh)
    if doc.get("format") != CHECKPOINT_FORMAT:
        raise ValueError(f"{path}: not a model checkpoint")
    if doc.get("version") != CHECKPOINT_VERSION:
        raise ValueError(f"{path}: unsupported checkpoint version {doc.get('version')}")
    params = LstmParams(
        *(np.array(doc["weights"][n]) for n in ("w_i", "w_f", "w_o", "w_c")),
        *(np.array(doc["biases"][n]) for n in ("b_i", "b_f", "b_o", "b_c")),
        conventional_output=bool(doc["conventional_output"]),
    )
    readout = Readout(np.array(doc["readout"]["weights"]), float(doc["readout"]["bias"]))
    return params, readout, doc.get("meta", {})


def save_loss_history(history, path) -> None:
    """Write the per-epoch loss curve as CSV ``epoch,loss``."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["epoch", "loss"])
        for epoch, loss in enumerate(history):
            writer.writerow([epoch, repr(float(loss))])
