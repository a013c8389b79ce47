"""Encoder forward/backward against hand computation and finite differences."""

import math

import numpy as np
import pytest
import scipy.sparse as sp

from textcl import (
    DataError,
    EncoderParams,
    NumericError,
    backward,
    classify,
    encode,
    fuse,
    gcn_forward,
    init_params,
    load_checkpoint,
    normalize_adjacency,
    save_checkpoint,
    sgd_step,
)


def small_setup(seed=0, n_word=3, n_doc=5, emb_dim=4, hidden=5, n_classes=3):
    """Random normalized adjacency + features + params for a tiny graph."""
    rng = np.random.default_rng(seed)
    n = n_word + n_doc
    dense = rng.random((n, n)) * (rng.random((n, n)) < 0.4)
    dense = np.triu(dense, k=1)
    dense = dense + dense.T + np.eye(n)
    a_norm = normalize_adjacency(sp.csr_array(dense))
    x = np.zeros((n, emb_dim))
    x[n_word:] = rng.standard_normal((n_doc, emb_dim))
    params = init_params(emb_dim, hidden, hidden, n_classes, lam=0.7, seed=seed + 1)
    return a_norm, x, params, n_word


class TestForward:
    def test_zero_w0_collapses_h(self):
        a_norm, x, params, _ = small_setup()
        params.w0[:] = 0.0
        h, _ = gcn_forward(a_norm, x, params)
        np.testing.assert_array_equal(h, np.zeros_like(h))

    def test_identity_adjacency_is_mlp(self):
        _, x, params, _ = small_setup()
        eye = sp.csr_array(sp.eye_array(x.shape[0]))
        h, _ = gcn_forward(eye, x, params)
        expected = np.maximum(x @ params.w0, 0.0) @ params.w1
        np.testing.assert_allclose(h, expected, atol=1e-14)

    def test_three_node_path_by_hand(self):
        # Path 0-1-2 with self-loops: deg = (2, 3, 2).
        a = np.array([[1.0, 1.0, 0.0], [1.0, 1.0, 1.0], [0.0, 1.0, 1.0]])
        deg = a.sum(axis=1)
        a_hand = a / np.sqrt(np.outer(deg, deg))
        x = np.array([[1.0, -1.0], [0.5, 2.0], [-2.0, 0.0]])
        w0 = np.array([[1.0, 0.0, 2.0], [0.0, -1.0, 1.0]])
        w1 = np.array([[1.0], [2.0], [-1.0]])
        params = EncoderParams(
            w0=w0, w1=w1, fc_h=np.eye(1), fc_x=np.eye(2, 1), lam=1.0
        )
        h, _ = gcn_forward(sp.csr_array(a_hand), x, params)
        expected = a_hand @ np.maximum(a_hand @ x @ w0, 0.0) @ w1
        np.testing.assert_allclose(h, expected, atol=1e-14)

    def test_custom_activation_hook(self):
        a_norm, x, params, _ = small_setup()

        def identity(v):
            return v

        h1, trace = gcn_forward(a_norm, x, params, activation=identity)
        h2, _ = gcn_forward(a_norm, 2.0 * x, params, activation=identity)
        np.testing.assert_allclose(h2, 2.0 * h1, atol=1e-12)
        assert trace.activation == "identity"

    def test_dim_mismatch_errors(self):
        a_norm, x, params, _ = small_setup()
        with pytest.raises(DataError, match="emb_dim"):
            gcn_forward(a_norm, x[:, :2], params)
        with pytest.raises(DataError, match="rows"):
            gcn_forward(a_norm, x[:-1], params)


class TestFuse:
    def _branches(self):
        rng = np.random.default_rng(3)
        h_doc = rng.standard_normal((4, 5))
        x_doc = rng.standard_normal((4, 6))
        fc_h = rng.standard_normal((5, 3))
        fc_x = rng.standard_normal((6, 3))
        return h_doc, x_doc, fc_h, fc_x

    def test_lambda_one_is_graph_branch(self):
        h_doc, x_doc, fc_h, fc_x = self._branches()
        params = EncoderParams(np.eye(6, 5), np.eye(5), fc_h, fc_x, lam=1.0)
        np.testing.assert_allclose(fuse(h_doc, x_doc, params), h_doc @ fc_h)

    def test_lambda_zero_is_embedding_branch(self):
        h_doc, x_doc, fc_h, fc_x = self._branches()
        params = EncoderParams(np.eye(6, 5), np.eye(5), fc_h, fc_x, lam=0.0)
        np.testing.assert_allclose(fuse(h_doc, x_doc, params), x_doc @ fc_x)

    def test_lambda_half_is_average(self):
        h_doc, x_doc, fc_h, fc_x = self._branches()
        params = EncoderParams(np.eye(6, 5), np.eye(5), fc_h, fc_x, lam=0.5)
        want = 0.5 * (h_doc @ fc_h) + 0.5 * (x_doc @ fc_x)
        np.testing.assert_allclose(fuse(h_doc, x_doc, params), want, atol=1e-15)

    def test_encode_composes_forward_and_fuse(self):
        a_norm, x, params, n_word = small_setup()
        z, trace = encode(a_norm, x, params, n_word)
        h, _ = gcn_forward(a_norm, x, params)
        want = fuse(h[n_word:], x[n_word:], params)
        np.testing.assert_allclose(z, want, atol=1e-14)
        assert z.shape == (x.shape[0] - n_word, params.n_classes)
        assert trace.z is not None


class TestClassify:
    def test_uniform_logits(self):
        p = classify(np.zeros((2, 4)))
        np.testing.assert_allclose(p, np.full((2, 4), 0.25), atol=1e-15)

    def test_large_logits_stable(self):
        p = classify(np.array([[1000.0, 0.0]]))
        assert np.all(np.isfinite(p))
        np.testing.assert_allclose(p[0, 0], 1.0, atol=1e-12)

    def test_log_odds(self):
        p = classify(np.array([[math.log(1.0), math.log(3.0)]]))
        np.testing.assert_allclose(p, [[0.25, 0.75]], atol=1e-12)

    def test_rows_sum_to_one(self):
        rng = np.random.default_rng(4)
        p = classify(rng.standard_normal((50, 7)) * 10)
        np.testing.assert_allclose(p.sum(axis=1), np.ones(50), atol=1e-9)

    def test_non_finite_rejected(self):
        with pytest.raises(NumericError):
            classify(np.array([[np.nan, 0.0]]))


def numeric_gradients(a_norm, x, params, n_word, c, step=1e-5):
    """Central finite differences of L = sum(z * c) over every tensor entry."""
    out = {}
    for name, tensor in params.tensors().items():
        grad = np.zeros_like(tensor)
        it = np.nditer(tensor, flags=["multi_index"])
        for _ in it:
            idx = it.multi_index
            orig = tensor[idx]
            tensor[idx] = orig + step
            z_plus, _ = encode(a_norm, x, params, n_word)
            tensor[idx] = orig - step
            z_minus, _ = encode(a_norm, x, params, n_word)
            tensor[idx] = orig
            grad[idx] = (np.sum(z_plus * c) - np.sum(z_minus * c)) / (2 * step)
        out[name] = grad
    return out


def max_rel_err(analytic, numeric):
    denom = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), 1e-6)
    return float(np.max(np.abs(analytic - numeric) / denom))


class TestBackward:
    def test_zero_upstream_zero_grads(self):
        a_norm, x, params, n_word = small_setup()
        z, trace = encode(a_norm, x, params, n_word)
        grads = backward(trace, np.zeros_like(z), params)
        for tensor in (grads.w0, grads.w1, grads.fc_h, grads.fc_x):
            np.testing.assert_array_equal(tensor, np.zeros_like(tensor))

    def test_matches_finite_differences(self):
        for seed in range(3):
            a_norm, x, params, n_word = small_setup(seed=seed)
            rng = np.random.default_rng(100 + seed)
            z, trace = encode(a_norm, x, params, n_word)
            c = rng.standard_normal(z.shape)
            grads = backward(trace, c, params)
            numeric = numeric_gradients(a_norm, x, params, n_word, c)
            for name, analytic in (
                ("w0", grads.w0),
                ("w1", grads.w1),
                ("fc_h", grads.fc_h),
                ("fc_x", grads.fc_x),
            ):
                assert max_rel_err(analytic, numeric[name]) < 1e-4, name

    def test_dead_relu_blocks_graph_gradients(self):
        a_norm, x, params, n_word = small_setup()
        x = -np.abs(x)  # non-positive features
        params.w0 = np.abs(params.w0)  # so pre = (a@x)@w0 <= 0 everywhere
        z, trace = encode(a_norm, x, params, n_word)
        assert np.all(trace.pre <= 0)
        grads = backward(trace, np.ones_like(z), params)
        np.testing.assert_array_equal(grads.w0, np.zeros_like(grads.w0))
        np.testing.assert_array_equal(grads.w1, np.zeros_like(grads.w1))
        assert np.any(grads.fc_x != 0)

    def test_linear_in_upstream(self):
        a_norm, x, params, n_word = small_setup(seed=5)
        rng = np.random.default_rng(6)
        z, trace = encode(a_norm, x, params, n_word)
        d1, d2 = rng.standard_normal((2,) + z.shape)
        ga = backward(trace, d1, params)
        gb = backward(trace, d2, params)
        gsum = backward(trace, d1 + d2, params)
        for a, b, s in (
            (ga.w0, gb.w0, gsum.w0),
            (ga.w1, gb.w1, gsum.w1),
            (ga.fc_h, gb.fc_h, gsum.fc_h),
            (ga.fc_x, gb.fc_x, gsum.fc_x),
        ):
            np.testing.assert_allclose(a + b, s, atol=1e-9)

    def test_stale_trace_detected(self):
        a_norm, x, params, n_word = small_setup()
        z, trace = encode(a_norm, x, params, n_word)
        grads = backward(trace, np.ones_like(z), params)
        sgd_step(params, grads, lr=0.01)
        with pytest.raises(DataError, match="stale"):
            backward(trace, np.ones_like(z), params)

    def test_non_relu_trace_refused(self):
        a_norm, x, params, n_word = small_setup()
        _, trace = gcn_forward(a_norm, x, params, activation=lambda v: v)
        trace.n_word = n_word
        trace.h_doc = trace.h[n_word:]
        trace.x_doc = x[n_word:]
        trace.z = fuse(trace.h_doc, trace.x_doc, params)
        with pytest.raises(DataError, match="relu"):
            backward(trace, np.zeros_like(trace.z), params)

    def test_convolution_trace_lacks_fusion(self):
        a_norm, x, params, _ = small_setup()
        h, trace = gcn_forward(a_norm, x, params)
        with pytest.raises(DataError, match="encode"):
            backward(trace, np.zeros_like(h), params)


class TestSgdAndCheckpoint:
    def test_sgd_update_rule(self):
        a_norm, x, params, n_word = small_setup()
        z, trace = encode(a_norm, x, params, n_word)
        grads = backward(trace, np.ones_like(z), params)
        before = {k: v.copy() for k, v in params.tensors().items()}
        sgd_step(params, grads, lr=0.1)
        for name, grad in (("w0", grads.w0), ("fc_x", grads.fc_x)):
            np.testing.assert_allclose(
                params.tensors()[name], before[name] - 0.1 * grad, atol=1e-15
            )
        assert params.version == 1

    def test_non_finite_update_aborts(self):
        a_norm, x, params, n_word = small_setup()
        z, trace = encode(a_norm, x, params, n_word)
        grads = backward(trace, np.ones_like(z), params)
        grads.w1[0, 0] = np.inf
        with pytest.raises(NumericError, match="w1"):
            sgd_step(params, grads, lr=0.1)

    def test_checkpoint_roundtrip_exact(self, tmp_path):
        params = init_params(6, 5, 4, 3, lam=0.35, seed=9)
        params.version = 7
        path = tmp_path / "model.ckpt"
        save_checkpoint(path, params, seed=123)
        loaded, seed = load_checkpoint(path)
        assert seed == 123
        assert loaded.lam == params.lam
        for name, tensor in params.tensors().items():
            np.testing.assert_array_equal(loaded.tensors()[name], tensor)

    def test_checkpoint_bad_magic(self, tmp_path):
        path = tmp_path / "bad.ckpt"
        path.write_bytes(b"NOTACKPT" + b"\x00" * 64)
        with pytest.raises(DataError, match="magic"):
            load_checkpoint(path)

    def test_checkpoint_truncated(self, tmp_path):
        params = init_params(6, 5, 4, 3, lam=0.5, seed=0)
        path = tmp_path / "model.ckpt"
        save_checkpoint(path, params, seed=1)
        data = path.read_bytes()
        path.write_bytes(data[: len(data) - 16])
        with pytest.raises(DataError, match="truncated"):
            load_checkpoint(path)
