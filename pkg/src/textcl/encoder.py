"""Two-layer graph convolution encoder with fusion and softmax classifier.

Forward pipeline over a normalized adjacency a_norm and node features x:

    h   = a_norm @ relu(a_norm @ x @ w0) @ w1          (all nodes)
    z   = lam * h_doc @ fc_h + (1 - lam) * x_doc @ fc_x  (document rows)
    p   = row-softmax(z)

Gradients are hand-derived for exactly this architecture (no autodiff); the
test suite checks every parameter tensor against central finite differences.

Checkpoint byte layout (little-endian):
    bytes 0..7    magic b"TXCLCKP1"
    4 x uint32    emb_dim, hidden_dim, out_dim, n_classes
    1 x float64   fusion coefficient lam
    1 x int64     master seed recorded at save time
    then float64 row-major arrays, in order:
        w0   (emb_dim  x hidden_dim)
        w1   (hidden_dim x out_dim)
        fc_h (out_dim  x n_classes)
        fc_x (emb_dim  x n_classes)
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np

from .errors import DataError, NumericError

_CKPT_MAGIC = b"TXCLCKP1"


@dataclass
class EncoderParams:
    """Learnable tensors plus the fixed fusion coefficient lam.

    version increments on every in-place update so traces can detect
    staleness."""

    w0: np.ndarray
    w1: np.ndarray
    fc_h: np.ndarray
    fc_x: np.ndarray
    lam: float
    version: int = 0

    @property
    def emb_dim(self) -> int:
        return self.w0.shape[0]

    @property
    def hidden_dim(self) -> int:
        return self.w0.shape[1]

    @property
    def out_dim(self) -> int:
        return self.w1.shape[1]

    @property
    def n_classes(self) -> int:
        return self.fc_h.shape[1]

    def tensors(self) -> dict[str, np.ndarray]:
        return {"w0": self.w0, "w1": self.w1, "fc_h": self.fc_h, "fc_x": self.fc_x}


@dataclass
class Gradients:
    w0: np.ndarray
    w1: np.ndarray
    fc_h: np.ndarray
    fc_x: np.ndarray

    def scaled_add(self, other: "Gradients", factor: float = 1.0) -> "Gradients":
        return Gradients(
            self.w0 + factor * other.w0,
            self.w1 + factor * other.w1,
            self.fc_h + factor * other.fc_h,
            self.fc_x + factor * other.fc_x,
        )


@dataclass
class ForwardTrace:
    """Cached intermediates of one forward pass, consumed by backward()."""

    a_norm: object
    x: np.ndarray
    ax: np.ndarray
    pre: np.ndarray
    post: np.ndarray
    h: np.ndarray
    activation: str
    params_version: int
    n_word: int | None = None
    h_doc: np.ndarray | None = None
    x_doc: np.ndarray | None = None
    z: np.ndarray | None = None


def _glorot(rng: np.random.Generator, fan_in: int, fan_out: int) -> np.ndarray:
    bound = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-bound, bound, size=(fan_in, fan_out))


def init_params(
    emb_dim: int,
    hidden_dim: int,
    out_dim: int,
    n_classes: int,
    lam: float,
    seed: int,
) -> EncoderParams:
    """Seeded uniform Glorot initialization of all four tensors."""
    if not 0.0 <= lam <= 1.0:
        raise DataError(f"fusion coefficient must be in [0, 1], got {lam}")
    rng = np.random.default_rng(seed)
    return EncoderParams(
        w0=_glorot(rng, emb_dim, hidden_dim),
        w1=_glorot(rng, hidden_dim, out_dim),
        fc_h=_glorot(rng, out_dim, n_classes),
        fc_x=_glorot(rng, emb_dim, n_classes),
        lam=lam,
    )


def gcn_forward(a_norm, x: np.ndarray, params: EncoderParams, activation=None):
    """Two-layer graph convolution; returns (h, trace).

    activation=None means ReLU. Passing a custom callable (e.g. identity,
    to check linearity in x) yields a trace that backward() refuses.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape[1] != params.emb_dim:
        raise DataError(
            f"feature dim {x.shape[1]} does not match encoder emb_dim {params.emb_dim}"
        )
    if a_norm.shape[0] != x.shape[0]:
        raise DataError(
            f"adjacency is {a_norm.shape[0]}x{a_norm.shape[1]} but features have "
            f"{x.shape[0]} rows"
        )
    ax = a_norm @ x
    pre = ax @ params.w0
    if activation is None:
        post = np.maximum(pre, 0.0)
        act_name = "relu"
    else:
        post = activation(pre)
        act_name = getattr(activation, "__name__", "custom")
    h = (a_norm @ post) @ params.w1
    trace = ForwardTrace(
        a_norm=a_norm,
        x=x,
        ax=ax,
        pre=pre,
        post=post,
        h=h,
        activation=act_name,
        params_version=params.version,
    )
    return h, trace


def fuse(h_doc: np.ndarray, x_doc: np.ndarray, params: EncoderParams) -> np.ndarray:
    """Convex combination of the graph branch and the raw-embedding branch,
    both projected to class space."""
    if h_doc.shape[0] != x_doc.shape[0]:
        raise DataError(
            f"branch row mismatch: {h_doc.shape[0]} graph rows vs "
            f"{x_doc.shape[0]} embedding rows"
        )
    lam = params.lam
    return lam * (h_doc @ params.fc_h) + (1.0 - lam) * (x_doc @ params.fc_x)


def encode(a_norm, x: np.ndarray, params: EncoderParams, n_word: int):
    """Full document-representation pass: convolution then fusion.

    Returns (z, trace) with the trace carrying everything backward() needs.
    """
    h, trace = gcn_forward(a_norm, x, params)
    trace.n_word = n_word
    trace.h_doc = h[n_word:]
    trace.x_doc = x[n_word:]
    trace.z = fuse(trace.h_doc, trace.x_doc, params)
    return trace.z, trace


def classify(z: np.ndarray) -> np.ndarray:
    """Row-wise softmax with max subtraction; rows sum to 1."""
    z = np.asarray(z, dtype=np.float64)
    if not np.all(np.isfinite(z)):
        raise NumericError("non-finite logits passed to classify")
    shifted = z - z.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def backward(trace: ForwardTrace, dz: np.ndarray, params: EncoderParams) -> Gradients:
    """Analytic gradients of all four tensors given the upstream gradient
    on the fused document representations z."""
    if trace.params_version != params.version:
        raise DataError(
            f"stale trace: computed at params version {trace.params_version}, "
            f"current is {params.version}"
        )
    if trace.z is None or trace.h_doc is None:
        raise DataError("trace lacks fusion intermediates; use encode(), "
                        "not gcn_forward(), before backward()")
    if trace.activation != "relu":
        raise DataError(f"backward supports the relu activation only, "
                        f"trace used {trace.activation!r}")
    dz = np.asarray(dz, dtype=np.float64)
    if dz.shape != trace.z.shape:
        raise DataError(f"upstream gradient shape {dz.shape} does not match "
                        f"z shape {trace.z.shape}")

    lam = params.lam
    d_fc_h = lam * (trace.h_doc.T @ dz)
    d_fc_x = (1.0 - lam) * (trace.x_doc.T @ dz)

    d_h = np.zeros_like(trace.h)
    d_h[trace.n_word :] = lam * (dz @ params.fc_h.T)

    t = trace.a_norm @ trace.post
    d_w1 = t.T @ d_h
    d_t = d_h @ params.w1.T
    # a_norm is symmetric, so its transpose-product is itself.
    d_post = trace.a_norm @ d_t
    d_pre = d_post * (trace.pre > 0)
    d_w0 = trace.ax.T @ d_pre
    return Gradients(w0=d_w0, w1=d_w1, fc_h=d_fc_h, fc_x=d_fc_x)


def sgd_step(params: EncoderParams, grads: Gradients, lr: float) -> None:
    """Plain gradient-descent update, in place. Invalidates existing traces."""
    params.w0 -= lr * grads.w0
    params.w1 -= lr * grads.w1
    params.fc_h -= lr * grads.fc_h
    params.fc_x -= lr * grads.fc_x
    params.version += 1
    for name, tensor in params.tensors().items():
        if not np.all(np.isfinite(tensor)):
            raise NumericError(f"non-finite values in {name} after update")


def save_checkpoint(path, params: EncoderParams, seed: int) -> None:
    """Write the versioned binary checkpoint documented in the module
    docstring."""
    with open(path, "wb") as fh:
        fh.write(_CKPT_MAGIC)
        fh.write(
            struct.pack(
                "<4I", params.emb_dim, params.hidden_dim, params.out_dim, params.n_classes
            )
        )
        fh.write(struct.pack("<d", params.lam))
        fh.write(struct.pack("<q", seed))
        for tensor in (params.w0, params.w1, params.fc_h, params.fc_x):
            fh.write(np.ascontiguousarray(tensor, dtype="<f8").tobytes())


def load_checkpoint(path):
    """Read a checkpoint; returns (params, seed)."""
    with open(path, "rb") as fh:
        magic = fh.read(8)
        if magic != _CKPT_MAGIC:
            raise DataError(f"{path}: bad checkpoint magic {magic!r}")
        emb_dim, hidden_dim, out_dim, n_classes = struct.unpack("<4I", fh.read(16))
        (lam,) = struct.unpack("<d", fh.read(8))
        (seed,) = struct.unpack("<q", fh.read(8))
        shapes = [
            (emb_dim, hidden_dim),
            (hidden_dim, out_dim),
            (out_dim, n_classes),
            (emb_dim, n_classes),
        ]
        tensors = []
        for shape in shapes:
            count = shape[0] * shape[1]
            buf = fh.read(8 * count)
            if len(buf) != 8 * count:
                raise DataError(f"{path}: truncated checkpoint")
            tensors.append(np.frombuffer(buf, dtype="<f8").reshape(shape).copy())
    params = EncoderParams(*tensors, lam=lam)
    return params, seed
