"""Training objectives: temperature-scaled contrastive loss over two views
with refined negative sets, plus cross-entropy over labeled documents.

Per anchor i in one view, the positive is the same document in the other
view and the candidates in the denominator are the positive itself plus
every negative document in *both* views:

    loss_i = -ln( exp(s_pos/t) / (exp(s_pos/t) + sum_neg exp(s_neg/t)) )

with s = cosine similarity and t the temperature. The total is the mean
over all anchors of both views. Anchors with an empty negative set
contribute exactly zero (the ratio is 1). Gradients with respect to both
representation matrices are returned alongside the scalar.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DataError, NumericError
from .negatives import NegativeIndex


@dataclass
class LossReport:
    """One epoch's loss components; combined == cross_entropy + beta *
    contrastive in the same float precision."""

    contrastive: float
    cross_entropy: float
    combined: float
    beta: float
    tau: float


def _unit_rows(z: np.ndarray, view: int) -> tuple[np.ndarray, np.ndarray]:
    norms = np.sqrt((z * z).sum(axis=1))
    if np.any(norms == 0):
        bad = int(np.argmax(norms == 0))
        raise NumericError(f"zero-norm representation for document {bad} in view {view}")
    return z / norms[:, None], norms


def contrastive_loss(
    z1: np.ndarray, z2: np.ndarray, index: NegativeIndex, tau: float
):
    """Contrastive loss and its gradients with respect to z1 and z2.

    Returns (loss, dz1, dz2). Deterministic: anchors are processed in id
    order and per-anchor reductions are plain numpy sums.
    """
    if tau <= 0:
        raise ConfigError(f"temperature must be positive, got {tau}")
    z1 = np.asarray(z1, dtype=np.float64)
    z2 = np.asarray(z2, dtype=np.float64)
    if z1.shape != z2.shape:
        raise DataError(f"view shapes differ: {z1.shape} vs {z2.shape}")
    n = z1.shape[0]

    unit1, norm1 = _unit_rows(z1, view=1)
    unit2, norm2 = _unit_rows(z2, view=2)
    units = (unit1, unit2)
    norms = (norm1, norm2)

    s11 = unit1 @ unit1.T
    s12 = unit1 @ unit2.T
    s22 = unit2 @ unit2.T

    grads = (np.zeros_like(z1), np.zeros_like(z2))
    weight = 1.0 / (2 * n)
    total = 0.0

    for a in (0, 1):
        b = 1 - a
        sim_same = s11 if a == 0 else s22
        sim_cross = s12 if a == 0 else s12.T
        for i in range(n):
            neg = index.negatives.get(i)
            if neg is None or len(neg) == 0:
                continue
            # Cosine values: positive first, then negatives in the anchor's
            # view, then negatives in the other view.
            cos = np.concatenate(
                ([sim_cross[i, i]], sim_same[i, neg], sim_cross[i, neg])
            )
            logits = cos / tau
            m = logits.max()
            e = np.exp(logits - m)
            denom = e.sum()
            total += weight * (-logits[0] + m + np.log(denom))

            # d loss / d cos: softmax minus the one-hot positive, over tau.
            coef = weight * (e / denom) / tau
            coef[0] -= weight / tau

            partners = np.vstack([units[b][i], units[a][neg], units[b][neg]])
            anchor_unit = units[a][i]
            grads[a][i] += (coef @ partners - (coef @ cos) * anchor_unit) / norms[a][i]

            back = coef[:, None] * (anchor_unit[None, :] - cos[:, None] * partners)
            grads[b][i] += back[0] / norms[b][i]
            m_neg = len(neg)
            grads[a][neg] += back[1 : 1 + m_neg] / norms[a][neg, None]
            grads[b][neg] += back[1 + m_neg :] / norms[b][neg, None]

    return float(total), grads[0], grads[1]


def cross_entropy_loss(p: np.ndarray, labels: np.ndarray, train_mask: np.ndarray):
    """Summed negative log-likelihood over labeled documents.

    p holds row-wise class probabilities (softmax output). Returns
    (loss, gradient w.r.t. the logits that produced p): the gradient is
    p - onehot(y) on labeled rows and zero elsewhere.
    """
    p = np.asarray(p, dtype=np.float64)
    labels = np.asarray(labels)
    mask = np.asarray(train_mask, dtype=bool)
    n, n_classes = p.shape
    idx = np.flatnonzero(mask)
    y = labels[idx]
    if np.any(y < 0) or np.any(y >= n_classes):
        bad = int(idx[np.argmax((y < 0) | (y >= n_classes))])
        raise DataError(
            f"document {bad} has label {labels[bad]} outside [0, {n_classes})"
        )
    # A zero probability legitimately yields an infinite loss; the trainer
    # turns that into its own diagnostic, so no warning here.
    with np.errstate(divide="ignore"):
        loss = float(-np.log(p[idx, y]).sum()) if len(idx) else 0.0
    dlogits = np.zeros_like(p)
    if len(idx):
        dlogits[idx] = p[idx]
        dlogits[idx, y] -= 1.0
    return loss, dlogits


def combine(ce: float, cl: float, beta: float) -> float:
    """Combined objective: cross-entropy plus beta times the contrastive
    term."""
    return ce + beta * cl


def make_report(ce: float, cl: float, beta: float, tau: float) -> LossReport:
    return LossReport(
        contrastive=cl,
        cross_entropy=ce,
        combined=combine(ce, cl, beta),
        beta=beta,
        tau=tau,
    )
