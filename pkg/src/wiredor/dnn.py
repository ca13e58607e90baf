"""Desk-scale DNN inference harness.

Runs conv/dense layers with every scalar multiplication routed through the
approximate float path (im2col + elementwise kernel), accumulating in exact
float32, and reports per-layer error and top-1 agreement against the exact
multiplier baseline. Models are tiny and seeded: the point is ordering and
regression checks, not benchmark accuracy.
"""

import json
import math
import struct
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import ModelFormatError
from .fp import BFLOAT16, FLOAT32, FORMATS, FpFormat
from .mulconfig import MulConfig

__all__ = [
    "Conv2D",
    "Dense",
    "ReLU",
    "MaxPool",
    "Flatten",
    "TinyModel",
    "EvalResult",
    "make_toy_cnn",
    "synthetic_batch",
    "run_layer",
    "run_model",
    "evaluate",
    "save_model",
    "load_model",
]

_MAGIC = b"WORNET1\n"


@dataclass
class Conv2D:
    weights: np.ndarray  # (cout, cin, kh, kw) float32
    bias: np.ndarray  # (cout,) float32
    stride: int = 1
    pad: int = 0


@dataclass
class Dense:
    weights: np.ndarray  # (out_features, in_features) float32
    bias: np.ndarray


@dataclass
class ReLU:
    pass


@dataclass
class MaxPool:
    """Fixed 2x2 window, stride 2; trailing odd row/col dropped."""


@dataclass
class Flatten:
    pass


@dataclass
class TinyModel:
    layers: list
    input_shape: tuple[int, int, int]  # (channels, height, width)
    seed: int = 0


@dataclass(frozen=True)
class EvalResult:
    config_label: str
    datatype: str
    per_layer_mean_rel_error: tuple[float, ...]
    final_logit_max_abs_error: float
    top1_agreement: float

    def to_dict(self) -> dict:
        return {
            "config": self.config_label,
            "datatype": self.datatype,
            "per_layer_mean_rel_error": list(self.per_layer_mean_rel_error),
            "final_logit_max_abs_error": self.final_logit_max_abs_error,
            "top1_agreement": self.top1_agreement,
        }


# --- raw-word conversions -------------------------------------------------


def floats_to_words(x: np.ndarray, fmt: FpFormat) -> np.ndarray:
    u = np.ascontiguousarray(x, dtype=np.float32).view(np.uint32)
    if fmt.name == "float32":
        return u
    if fmt.name == "bfloat16":
        w = (u >> np.uint32(16)).astype(np.uint32)
        nan = np.isnan(x)
        if nan.any():
            # plain truncation could turn a NaN into inf; force the quiet bit
            w = np.where(nan, w | np.uint32(1 << (fmt.mantissa_bits - 1)), w)
        return w
    raise ValueError(f"no word conversion for format {fmt.name}")


def words_to_floats(w: np.ndarray, fmt: FpFormat) -> np.ndarray:
    if fmt.name == "float32":
        return np.ascontiguousarray(w, dtype=np.uint32).view(np.float32)
    if fmt.name == "bfloat16":
        return (np.ascontiguousarray(w, dtype=np.uint32) << np.uint32(16)).view(np.float32)
    raise ValueError(f"no word conversion for format {fmt.name}")


def _exact_mul(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return (x * y).astype(np.float32)


def _approx_mul(fmt: FpFormat, config: MulConfig):
    def mul(x: np.ndarray, y: np.ndarray) -> np.ndarray:
        xw = floats_to_words(np.asarray(x, dtype=np.float32), fmt)
        yw = floats_to_words(np.asarray(y, dtype=np.float32), fmt)
        return words_to_floats(kernels.fp_mul_words(xw, yw, fmt, config), fmt)

    return mul


def _matmul(a: np.ndarray, b: np.ndarray, mul) -> np.ndarray:
    """(M, K) x (K, N) with elementwise ``mul`` and exact float32 accumulation."""
    m, k = a.shape
    k2, n = b.shape
    if k != k2:
        raise ValueError(f"shape mismatch: ({m},{k}) x ({k2},{n})")
    out = np.empty((m, n), dtype=np.float32)
    chunk = max(1, (1 << 22) // max(k * n, 1))
    for lo in range(0, m, chunk):
        hi = min(m, lo + chunk)
        products = mul(a[lo:hi, :, None], b[None, :, :])
        out[lo:hi] = products.sum(axis=1, dtype=np.float32)
    return out


def _im2col(x: np.ndarray, kh: int, kw: int, stride: int, pad: int):
    b, c, h, w = x.shape
    if pad:
        x = np.pad(x, ((0, 0), (0, 0), (pad, pad), (pad, pad)))
    oh = (h + 2 * pad - kh) // stride + 1
    ow = (w + 2 * pad - kw) // stride + 1
    if oh < 1 or ow < 1:
        raise ValueError("kernel does not fit the padded input")
    cols = np.empty((b, c, kh, kw, oh, ow), dtype=np.float32)
    for i in range(kh):
        for j in range(kw):
            cols[:, :, i, j] = x[:, :, i : i + stride * oh : stride, j : j + stride * ow : stride]
    patches = cols.transpose(0, 4, 5, 1, 2, 3).reshape(b * oh * ow, c * kh * kw)
    return patches, oh, ow


def run_layer(layer, x: np.ndarray, config: MulConfig | None = None, fmt: FpFormat = BFLOAT16) -> np.ndarray:
    """Forward one layer; ``config=None`` selects the exact float32 multiplier."""
    mul = _exact_mul if config is None else _approx_mul(fmt, config)
    if isinstance(layer, Conv2D):
        cout, cin, kh, kw = layer.weights.shape
        if x.ndim != 4 or x.shape[1] != cin:
            raise ValueError(f"conv2d expects (batch, {cin}, h, w), got {x.shape}")
        patches, oh, ow = _im2col(x, kh, kw, layer.stride, layer.pad)
        wmat = layer.weights.reshape(cout, cin * kh * kw).T
        out = _matmul(patches, wmat, mul)
        out = out.reshape(x.shape[0], oh, ow, cout).transpose(0, 3, 1, 2)
        return out + layer.bias[None, :, None, None]
    if isinstance(layer, Dense):
        if x.ndim != 2 or x.shape[1] != layer.weights.shape[1]:
            raise ValueError(f"dense expects (batch, {layer.weights.shape[1]}), got {x.shape}")
        return _matmul(x, layer.weights.T, mul) + layer.bias[None, :]
    if isinstance(layer, ReLU):
        return np.maximum(x, np.float32(0))
    if isinstance(layer, MaxPool):
        b, c, h, w = x.shape
        h2, w2 = h // 2, w // 2
        if h2 < 1 or w2 < 1:
            raise ValueError("input too small for 2x2 pooling")
        return x[:, :, : h2 * 2, : w2 * 2].reshape(b, c, h2, 2, w2, 2).max(axis=(3, 5))
    if isinstance(layer, Flatten):
        return x.reshape(x.shape[0], -1)
    raise TypeError(f"unknown layer {layer!r}")


def run_model(model: TinyModel, x: np.ndarray, config: MulConfig | None = None, fmt: FpFormat = BFLOAT16):
    """Forward all layers, returning the output of every layer in order."""
    outputs = []
    for layer in model.layers:
        x = run_layer(layer, x, config, fmt)
        outputs.append(x)
    return outputs


def _mean_rel_error(approx: np.ndarray, exact: np.ndarray) -> float:
    mask = exact != 0
    if not mask.any():
        return 0.0
    return float(np.mean(np.abs(approx[mask] - exact[mask]) / np.abs(exact[mask])))


def evaluate(
    model: TinyModel,
    data: np.ndarray,
    configs,
    fmt: FpFormat = BFLOAT16,
) -> list[EvalResult]:
    """Compare approximate runs against the exact float32 baseline.

    ``configs`` is a list of :class:`MulConfig` or ``None`` (the exact
    multiplier itself, which must reproduce the baseline bit-exactly).
    """
    if data.size == 0:
        raise ValueError("dataset is empty")
    baseline = run_model(model, data, config=None)
    base_logits = baseline[-1]
    base_top1 = np.argmax(base_logits, axis=1)
    results = []
    for config in configs:
        outs = run_model(model, data, config, fmt)
        per_layer = tuple(_mean_rel_error(o, e) for o, e in zip(outs, baseline))
        logits = outs[-1]
        results.append(
            EvalResult(
                config_label="exact" if config is None else config.label(),
                datatype="float32" if config is None else fmt.name,
                per_layer_mean_rel_error=per_layer,
                final_logit_max_abs_error=float(np.max(np.abs(logits - base_logits))),
                top1_agreement=float(np.mean(np.argmax(logits, axis=1) == base_top1)),
            )
        )
    return results


# --- seeded toy model and data ---------------------------------------------


def make_toy_cnn(seed: int = 0) -> TinyModel:
    """3-layer CNN (conv-relu-pool, conv-relu-pool, dense) on 1x16x16 inputs."""
    rng = np.random.default_rng(seed)

    def init(shape, fan_in):
        return (rng.uniform(-1.0, 1.0, shape) / math.sqrt(fan_in)).astype(np.float32)

    layers = [
        Conv2D(init((8, 1, 3, 3), 9), init((8,), 9)),
        ReLU(),
        MaxPool(),
        Conv2D(init((16, 8, 3, 3), 72), init((16,), 72)),
        ReLU(),
        MaxPool(),
        Flatten(),
        Dense(init((10, 64), 64), init((10,), 64)),
    ]
    return TinyModel(layers=layers, input_shape=(1, 16, 16), seed=seed)


def synthetic_batch(model: TinyModel, count: int, seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    c, h, w = model.input_shape
    return rng.uniform(-1.0, 1.0, (count, c, h, w)).astype(np.float32)


# --- flat binary serialization ----------------------------------------------


def save_model(model: TinyModel, path: str) -> None:
    """Self-describing header (JSON) + little-endian float32 payload."""
    entries = []
    blobs = []
    for layer in model.layers:
        if isinstance(layer, Conv2D):
            entries.append(
                {
                    "kind": "conv2d",
                    "stride": layer.stride,
                    "pad": layer.pad,
                    "weights": list(layer.weights.shape),
                    "bias": list(layer.bias.shape),
                }
            )
            blobs += [layer.weights, layer.bias]
        elif isinstance(layer, Dense):
            entries.append(
                {"kind": "dense", "weights": list(layer.weights.shape), "bias": list(layer.bias.shape)}
            )
            blobs += [layer.weights, layer.bias]
        elif isinstance(layer, ReLU):
            entries.append({"kind": "relu"})
        elif isinstance(layer, MaxPool):
            entries.append({"kind": "maxpool"})
        elif isinstance(layer, Flatten):
            entries.append({"kind": "flatten"})
        else:
            raise TypeError(f"cannot serialize layer {layer!r}")
    header = {
        "schema_version": 1,
        "dtype": "float32le",
        "seed": model.seed,
        "input_shape": list(model.input_shape),
        "layers": entries,
    }
    raw = json.dumps(header, sort_keys=True).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<I", len(raw)))
        fh.write(raw)
        for blob in blobs:
            fh.write(np.ascontiguousarray(blob, dtype="<f4").tobytes())


def load_model(path: str) -> TinyModel:
    with open(path, "rb") as fh:
        magic = fh.read(len(_MAGIC))
        if magic != _MAGIC:
            raise ModelFormatError(f"{path}: bad magic {magic!r}")
        (hlen,) = struct.unpack("<I", fh.read(4))
        try:
            header = json.loads(fh.read(hlen).decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise ModelFormatError(f"{path}: unreadable header: {exc}") from None
        if header.get("schema_version") != 1 or header.get("dtype") != "float32le":
            raise ModelFormatError(f"{path}: unsupported schema {header.get('schema_version')!r}")
        payload = fh.read()

    offset = 0

    def take(shape):
        nonlocal offset
        count = int(np.prod(shape))
        nbytes = count * 4
        if offset + nbytes > len(payload):
            raise ModelFormatError(f"{path}: payload truncated")
        arr = np.frombuffer(payload[offset : offset + nbytes], dtype="<f4").reshape(shape).copy()
        offset += nbytes
        return arr

    layers = []
    for entry in header["layers"]:
        kind = entry.get("kind")
        if kind == "conv2d":
            layers.append(Conv2D(take(entry["weights"]), take(entry["bias"]), entry["stride"], entry["pad"]))
        elif kind == "dense":
            layers.append(Dense(take(entry["weights"]), take(entry["bias"])))
        elif kind == "relu":
            layers.append(ReLU())
        elif kind == "maxpool":
            layers.append(MaxPool())
        elif kind == "flatten":
            layers.append(Flatten())
        else:
            raise ModelFormatError(f"{path}: unknown layer kind {kind!r}")
    if offset != len(payload):
        raise ModelFormatError(f"{path}: {len(payload) - offset} trailing payload bytes")
    return TinyModel(layers=layers, input_shape=tuple(header["input_shape"]), seed=header["seed"])
