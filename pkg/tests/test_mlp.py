import numpy as np
import pytest

from tcmnn.mlp import (Mlp, MlpConfig, MlpError, augment, deserialize_weights,
                       encode_targets, forward, gradients, init, predict_class,
                       serialize_weights, train_stochastic)

from .conftest import make_dataset


def small_config(**kw):
    defaults = dict(layer_sizes=(2, 3, 2), updates=200, trace_every=20, seed=3)
    defaults.update(kw)
    return MlpConfig(**defaults)


class TestInit:
    def test_zero_range_gives_zero_weights(self):
        net = init(small_config(init_range=0.0))
        for W, b in zip(net.weights, net.biases):
            assert not W.any()
            assert not b.any()

    def test_same_seed_same_network(self):
        a = init(small_config(seed=99))
        b = init(small_config(seed=99))
        for Wa, Wb in zip(a.weights, b.weights):
            np.testing.assert_array_equal(Wa, Wb)
        for ba, bb in zip(a.biases, b.biases):
            np.testing.assert_array_equal(ba, bb)

    def test_different_seed_differs(self):
        a = init(small_config(seed=1))
        b = init(small_config(seed=2))
        assert any((Wa != Wb).any() for Wa, Wb in zip(a.weights, b.weights))

    def test_weights_roughly_uniform(self):
        net = init(MlpConfig(layer_sizes=(40, 60, 10), seed=5))
        vals = np.concatenate([W.ravel() for W in net.weights])
        assert abs(vals.min() + 0.05) < 0.002
        assert abs(vals.max() - 0.05) < 0.002
        assert abs(vals.mean()) < 0.002
        hist, _ = np.histogram(vals, bins=10, range=(-0.05, 0.05))
        assert hist.min() > 0.7 * len(vals) / 10  # no empty decile


class TestForward:
    def test_zero_net_outputs_half(self):
        net = init(small_config(init_range=0.0))
        acts = forward(net, [0.7, -1.2])
        np.testing.assert_array_equal(acts[1], 0.5)
        np.testing.assert_array_equal(acts[2], 0.5)

    def test_hand_computed_1_1_1(self):
        net = Mlp([np.array([[2.0]]), np.array([[-1.0]])],
                  [np.array([0.5]), np.array([0.25])])
        h = 1 / (1 + np.exp(-(2.0 * 0.3 + 0.5)))
        o = 1 / (1 + np.exp(-(-1.0 * h + 0.25)))
        acts = forward(net, [0.3])
        assert acts[1][0] == pytest.approx(h, rel=1e-15)
        assert acts[2][0] == pytest.approx(o, rel=1e-15)

    def test_outputs_in_open_unit_interval(self):
        rng = np.random.default_rng(8)
        net = init(MlpConfig(layer_sizes=(3, 4, 2), init_range=2.0, seed=1))
        for _ in range(20):
            acts = forward(net, rng.normal(size=3) * 10)
            assert np.all(acts[-1] > 0.0)
            assert np.all(acts[-1] < 1.0)

    def test_dimension_mismatch(self):
        net = init(small_config())
        with pytest.raises(MlpError):
            forward(net, [1.0, 2.0, 3.0])


class TestEncodeTargets:
    def test_defaults(self):
        cfg = small_config()
        np.testing.assert_array_equal(encode_targets(0, cfg), [0.999, 0.001])

    def test_per_class_override(self):
        cfg = small_config(per_class_target_on={0: 0.5})
        np.testing.assert_array_equal(encode_targets(0, cfg), [0.5, 0.001])
        np.testing.assert_array_equal(encode_targets(1, cfg), [0.001, 0.999])

    def test_degenerate_equal_levels(self):
        cfg = small_config(target_on=0.3, target_off=0.3)
        np.testing.assert_array_equal(encode_targets(1, cfg), [0.3, 0.3])

    def test_label_out_of_range(self):
        with pytest.raises(MlpError):
            encode_targets(2, small_config())


class TestGradients:
    def test_matches_central_finite_differences(self):
        rng = np.random.default_rng(17)
        h = 1e-5
        for sizes in [(2, 3, 2), (4, 5, 3), (3, 4, 4, 2), (1, 1, 1)]:
            cfg = MlpConfig(layer_sizes=sizes, init_range=0.5,
                            seed=int(rng.integers(1 << 30)))
            net = init(cfg)
            x = rng.uniform(-1, 1, size=sizes[0])
            target = rng.uniform(0.1, 0.9, size=sizes[-1])

            def loss():
                out = forward(net, x)[-1]
                return 0.5 * float(((out - target) ** 2).sum())

            dWs, dbs = gradients(net, x, target)
            for layer in range(len(net.weights)):
                W = net.weights[layer]
                for i in range(W.shape[0]):
                    for j in range(W.shape[1]):
                        orig = W[i, j]
                        W[i, j] = orig + h
                        up = loss()
                        W[i, j] = orig - h
                        down = loss()
                        W[i, j] = orig
                        numeric = (up - down) / (2 * h)
                        assert dWs[layer][i, j] == pytest.approx(
                            numeric, rel=1e-4, abs=1e-9)
                b = net.biases[layer]
                for i in range(len(b)):
                    orig = b[i]
                    b[i] = orig + h
                    up = loss()
                    b[i] = orig - h
                    down = loss()
                    b[i] = orig
                    numeric = (up - down) / (2 * h)
                    assert dbs[layer][i] == pytest.approx(
                        numeric, rel=1e-4, abs=1e-9)


class TestTrainStochastic:
    def test_zero_updates_leaves_network(self):
        ds = make_dataset([[0.0, 0.0], [1.0, 1.0]], [0, 1])
        cfg = small_config(updates=0)
        net = init(cfg)
        before = [W.copy() for W in net.weights]
        trace = train_stochastic(net, ds, cfg)
        assert len(trace.samples) == 1
        assert trace.samples[0][0] == 0
        for W, B in zip(net.weights, before):
            np.testing.assert_array_equal(W, B)

    def test_xor_reaches_full_training_accuracy(self):
        ds = make_dataset([[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]],
                          [0, 1, 1, 0])
        cfg = MlpConfig(layer_sizes=(2, 4, 2), eta=0.5, updates=30_000,
                        trace_every=1000, seed=7, init_range=0.5)
        net = init(cfg)
        trace = train_stochastic(net, ds, cfg)
        preds = [predict_class(net, ex.features) for ex in ds.examples]
        assert preds == [0, 1, 1, 0]
        # squared error shrinks over training
        assert trace.samples[-1][1] < trace.samples[0][1]

    def test_trace_indices_strictly_increase_and_sse_finite(self):
        ds = make_dataset([[0.0, 0.0], [1.0, 1.0]], [0, 1])
        cfg = small_config(updates=95, trace_every=20)
        net = init(cfg)
        trace = train_stochastic(net, ds, cfg)
        steps = [s for s, _ in trace.samples]
        assert steps == [0, 20, 40, 60, 80, 95]
        assert all(np.isfinite(v) for _, v in trace.samples)

    def test_deterministic_given_seed(self):
        ds = make_dataset([[0.0, 0.0], [0.5, 0.2], [1.0, 1.0]], [0, 0, 1])
        cfg = small_config(updates=300, seed=11)
        net1, net2 = init(cfg), init(cfg)
        train_stochastic(net1, ds, cfg)
        train_stochastic(net2, ds, cfg)
        for W1, W2 in zip(net1.weights, net2.weights):
            np.testing.assert_array_equal(W1, W2)

    def test_weight_decay_shrinks(self):
        ds = make_dataset([[0.0, 0.0], [1.0, 1.0]], [0, 1])
        cfg = small_config(updates=500, weight_decay=0.01, eta=1e-9)
        net = init(cfg)
        norm0 = sum(float(np.abs(W).sum()) for W in net.weights)
        train_stochastic(net, ds, cfg)
        norm1 = sum(float(np.abs(W).sum()) for W in net.weights)
        assert norm1 < norm0 * 0.1

    def test_empty_train_rejected(self):
        from tcmnn.datamodel import DataSet
        ds = DataSet(name="e", n=2, C=2, class_names=("A", "B"),
                     classes_known=True, examples=())
        cfg = small_config()
        with pytest.raises(MlpError):
            train_stochastic(init(cfg), ds, cfg)


class TestPredictClass:
    def test_argmax(self):
        net = init(small_config(init_range=0.0))
        net.weights[-1][0, :] = 5.0  # drive output 0 high
        assert predict_class(net, [1.0, 1.0]) == 0

    def test_symmetric_zero_net_ties_to_zero(self):
        net = init(small_config(init_range=0.0))
        assert predict_class(net, [0.3, 0.4]) == 0


class TestAugment:
    def test_hidden_width_and_names(self):
        cfg = MlpConfig(layer_sizes=(3, 5, 4, 2), seed=2)
        net = init(cfg)
        ds = make_dataset([[0.1, 0.2, 0.3], [0.4, 0.5, 0.6]], [0, 1])
        aug0 = augment(net, ds, 0)
        aug1 = augment(net, ds, 1)
        assert aug0.n == 5
        assert aug1.n == 4
        assert aug0.attribute_names == ("H0", "H1", "H2", "H3", "H4")

    def test_zero_net_features_half(self):
        cfg = MlpConfig(layer_sizes=(2, 3, 2), init_range=0.0, seed=0)
        net = init(cfg)
        ds = make_dataset([[0.3, 0.9]], [0], C=2)
        aug = augment(net, ds, 0)
        assert aug.examples[0].features == (0.5, 0.5, 0.5)

    def test_labels_preserved(self):
        cfg = MlpConfig(layer_sizes=(2, 4, 2), seed=9)
        net = init(cfg)
        ds = make_dataset([[0.0, 1.0], [1.0, 0.0], [1.0, 1.0]], [1, 0, 1])
        aug = augment(net, ds, 0)
        assert [ex.label for ex in aug.examples] == [1, 0, 1]

    def test_matches_forward_activations(self):
        cfg = MlpConfig(layer_sizes=(2, 3, 2), seed=4)
        net = init(cfg)
        ds = make_dataset([[0.2, 0.8]], [0])
        aug = augment(net, ds, 0)
        acts = forward(net, [0.2, 0.8])
        np.testing.assert_allclose(aug.examples[0].features, acts[1], rtol=1e-15)

    def test_invalid_layer_index(self):
        net = init(small_config())
        ds = make_dataset([[0.0, 0.0]], [0], C=2)
        with pytest.raises(MlpError):
            augment(net, ds, 1)


class TestWeightFile:
    def test_round_trip(self):
        cfg = MlpConfig(layer_sizes=(3, 5, 2), seed=13)
        net = init(cfg)
        back = deserialize_weights(serialize_weights(net))
        assert back.layer_sizes == net.layer_sizes
        for W1, W2 in zip(net.weights, back.weights):
            np.testing.assert_array_equal(W1, W2)
        for b1, b2 in zip(net.biases, back.biases):
            np.testing.assert_array_equal(b1, b2)

    def test_round_trip_preserves_predictions(self):
        ds = make_dataset([[0.0, 0.0], [1.0, 1.0]], [0, 1])
        cfg = small_config(updates=500)
        net = init(cfg)
        train_stochastic(net, ds, cfg)
        back = deserialize_weights(serialize_weights(net))
        for ex in ds.examples:
            np.testing.assert_array_equal(forward(net, ex.features)[-1],
                                          forward(back, ex.features)[-1])

    def test_malformed_rejected(self):
        with pytest.raises(MlpError):
            deserialize_weights(b"bogus")
        good = serialize_weights(init(small_config()))
        with pytest.raises(MlpError):
            deserialize_weights(good + b"1.0\n")
