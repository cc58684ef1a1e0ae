import json

import numpy as np
import pytest

from errors import CheckpointError, DimensionError, StaleCacheError
from graphstate import StateGraph
from neural import (
    LOG_STD_INIT,
    LOG_STD_MIN,
    Adam,
    Architecture,
    GcnLayer,
    PolicyNet,
    clip_grad_norm,
    gaussian_entropy,
    gaussian_log_prob,
    gcn_forward,
    load_checkpoint,
    normalized_adjacency,
    save_checkpoint,
)
from graphstate import front_edges


def random_graph(rng, num_nodes, obs_dim, budget=0.3):
    features = rng.random((num_nodes, obs_dim))
    return StateGraph(node_features=features, edges=front_edges(features), budget_feature=budget)


def identity_layer(width, activation="identity"):
    return GcnLayer(np.eye(width), np.zeros(width), activation)


def test_isolated_nodes_pass_through():
    x = np.array([[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]])
    out = gcn_forward(identity_layer(2), x, np.zeros((0, 2), dtype=int))
    assert np.allclose(out, x)


def test_equal_features_in_a_clique_give_equal_rows():
    x = np.tile([[0.2, 0.7]], (4, 1))
    edges = np.array([[i, j] for i in range(4) for j in range(i + 1, 4)])
    layer = GcnLayer(np.array([[0.5, -1.0], [2.0, 0.3]]), np.array([0.1, -0.2]), "tanh")
    out = gcn_forward(layer, x, edges)
    assert np.allclose(out, out[0])


def test_gcn_matches_dense_formula(rng):
    x = rng.random((5, 3))
    edges = np.array([[0, 1], [1, 2], [3, 4]])
    weight, bias = rng.normal(size=(3, 4)), rng.normal(size=4)
    a = np.eye(5)
    for i, j in edges:
        a[i, j] = a[j, i] = 1.0
    d = np.diag(1.0 / np.sqrt(a.sum(axis=1)))
    expected = np.tanh(d @ a @ d @ x @ weight + bias)
    assert np.allclose(gcn_forward(GcnLayer(weight, bias), x, edges), expected)
    assert np.allclose(normalized_adjacency(5, edges), d @ a @ d)


def test_zero_weights_give_activated_bias(rng):
    bias = np.array([0.5, -0.25])
    out = gcn_forward(GcnLayer(np.zeros((3, 2)), bias), rng.random((4, 3)), np.array([[0, 1]]))
    assert np.allclose(out, np.tanh(bias))


def test_adjacency_rejects_bad_edges():
    with pytest.raises(DimensionError):
        normalized_adjacency(3, np.array([[0, 3]]))


@pytest.mark.parametrize("aux_dim", [0, 1])
def test_policy_is_permutation_invariant(rng, aux_dim):
    net = PolicyNet(Architecture(obs_dim=2, action_dim=2, hidden_dim=8, aux_dim=aux_dim), seed=3)
    graph = random_graph(rng, 7, 2)
    perm = rng.permutation(7)
    inverse = np.argsort(perm)
    permuted = StateGraph(graph.node_features[perm], inverse[graph.edges], graph.budget_feature)
    a, b = net.forward(graph), net.forward(permuted)
    assert np.allclose(a.action_mean, b.action_mean)
    assert a.value == pytest.approx(b.value)


def test_policy_outputs_in_range(rng):
    net = PolicyNet(Architecture(obs_dim=3, action_dim=3), seed=0)
    out = net.forward(random_graph(rng, 10, 3))
    assert out.action_mean.shape == (3,)
    assert np.all(np.abs(out.action_mean) < 1.0)
    assert np.isfinite(out.value)
    assert np.allclose(net.log_std, LOG_STD_INIT)


def test_policy_rejects_wrong_feature_width(rng):
    net = PolicyNet(Architecture(obs_dim=2, action_dim=2))
    with pytest.raises(DimensionError):
        net.forward(random_graph(rng, 4, 3))


def test_budget_feature_matters_only_with_aux(rng):
    graph = random_graph(rng, 5, 2, budget=0.0)
    late = StateGraph(graph.node_features, graph.edges, 1.0)
    with_aux = PolicyNet(Architecture(2, 2, hidden_dim=8, aux_dim=1), seed=1)
    without = PolicyNet(Architecture(2, 2, hidden_dim=8, aux_dim=0), seed=1)
    assert not np.allclose(with_aux.forward(graph).action_mean, with_aux.forward(late).action_mean)
    assert np.allclose(without.forward(graph).action_mean, without.forward(late).action_mean)


def scalar_loss(net, graph, c_mean, c_value, c_std):
    out = net.forward(graph)
    return float(c_mean @ out.action_mean + c_value * out.value + c_std @ net.log_std)


@pytest.mark.parametrize("gcn_layers", [1, 2])
@pytest.mark.parametrize("aux_dim", [0, 1])
def test_backward_matches_finite_differences(rng, gcn_layers, aux_dim):
    arch = Architecture(obs_dim=3, action_dim=2, gcn_layers=gcn_layers, hidden_dim=8, aux_dim=aux_dim)
    net = PolicyNet(arch, seed=5)
    graph = random_graph(rng, int(rng.integers(2, 11)), 3)
    c_mean, c_value, c_std = rng.normal(size=2), float(rng.normal()), rng.normal(size=2)

    out = net.forward(graph)
    grads = net.backward(out.cache, {"action_mean": c_mean, "value": c_value, "log_std": c_std})

    eps = 1e-5
    for name, param in net.params.items():
        flat = param.reshape(-1)
        numeric = np.zeros_like(flat)
        for k in range(flat.size):
            saved = flat[k]
            flat[k] = saved + eps
            up = scalar_loss(net, graph, c_mean, c_value, c_std)
            flat[k] = saved - eps
            down = scalar_loss(net, graph, c_mean, c_value, c_std)
            flat[k] = saved
            numeric[k] = (up - down) / (2 * eps)
        analytic = grads[name].reshape(-1)
        scale = np.maximum(np.abs(numeric), np.abs(analytic)).max()
        assert np.max(np.abs(numeric - analytic)) <= 1e-4 * max(scale, 1.0), name


def test_value_only_loss_touches_trunk_and_critic(rng):
    net = PolicyNet(Architecture(2, 2, hidden_dim=8), seed=2)
    out = net.forward(random_graph(rng, 6, 2))
    grads = net.backward(out.cache, {"value": 1.0})
    assert np.allclose(grads["critic.bias"], [1.0])
    assert np.allclose(grads["critic.weight"][:, 0], out.cache["embedding"])
    assert not grads["actor.weight"].any() and not grads["actor.bias"].any()
    assert not grads["log_std"].any()


def test_zero_upstream_gives_zero_gradients(rng):
    net = PolicyNet(Architecture(2, 2, hidden_dim=8))
    out = net.forward(random_graph(rng, 4, 2))
    grads = net.backward(out.cache, {})
    assert all(not g.any() for g in grads.values())
    assert set(grads) == set(net.params)


def test_stale_cache_is_rejected(rng):
    net = PolicyNet(Architecture(2, 2, hidden_dim=8))
    out = net.forward(random_graph(rng, 4, 2))
    net.mark_updated()
    with pytest.raises(StaleCacheError):
        net.backward(out.cache, {"value": 1.0})


def test_act_without_rng_is_the_mean(rng):
    net = PolicyNet(Architecture(2, 2, hidden_dim=8))
    graph = random_graph(rng, 5, 2)
    step = net.act(graph)
    assert np.array_equal(step["raw_action"], net.forward(graph).action_mean)
    sampled = net.act(graph, np.random.default_rng(0))
    assert np.all(np.abs(sampled["action"]) <= 1.0)
    assert sampled["log_prob"] == pytest.approx(gaussian_log_prob(sampled["raw_action"], step["raw_action"], net.log_std))


def test_gaussian_helpers():
    log_std = np.log(np.array([0.5, 2.0]))
    expected = -0.5 * np.log(2 * np.pi) * 2 - log_std.sum()
    assert gaussian_log_prob(np.zeros(2), np.zeros(2), log_std) == pytest.approx(expected)
    assert gaussian_entropy(log_std) == pytest.approx(np.sum(log_std + 0.5 * np.log(2 * np.pi * np.e)))


def test_clamp_log_std():
    net = PolicyNet(Architecture(2, 2, hidden_dim=4))
    net.params["log_std"][:] = [-10.0, 3.0]
    net.clamp_log_std()
    assert np.allclose(net.log_std, [LOG_STD_MIN, 0.0])


def test_clip_grad_norm():
    grads = {"a": np.array([3.0, 0.0]), "b": np.array([4.0])}
    assert clip_grad_norm(grads, 1.0) == pytest.approx(5.0)
    assert np.sqrt(np.sum(grads["a"] ** 2) + np.sum(grads["b"] ** 2)) == pytest.approx(1.0)
    untouched = {"a": np.array([0.3])}
    clip_grad_norm(untouched, 1.0)
    assert untouched["a"][0] == 0.3


def test_adam_moves_against_the_gradient():
    params = {"w": np.array([1.0, -1.0])}
    opt = Adam(params, lr=0.1)
    opt.step(params, {"w": np.array([2.0, -2.0])})
    # first Adam step has magnitude lr regardless of gradient scale
    assert np.allclose(params["w"], [0.9, -0.9])
    assert opt.t == 1


def test_checkpoint_round_trip_is_exact(rng, tmp_path):
    net = PolicyNet(Architecture(3, 2, gcn_layers=1, hidden_dim=8, aux_dim=0), seed=9)
    opt = Adam(net.params, lr=1e-3)
    out = net.forward(random_graph(rng, 4, 3))
    opt.step(net.params, net.backward(out.cache, {"value": 1.0}))
    path = save_checkpoint(net, tmp_path / "ckpt" / "policy.json", opt, {"epoch": 4})

    loaded = load_checkpoint(path, action_dim=2, obs_dim=3)
    assert loaded.net.arch == net.arch
    for name, value in net.params.items():
        assert np.array_equal(loaded.net.params[name], value)
    assert loaded.trainer_state == {"epoch": 4}
    restored = Adam(loaded.net.params, lr=0.5)
    loaded.restore_optimizer(restored)
    assert restored.t == 1 and restored.lr == 1e-3
    assert np.array_equal(restored.m["critic.bias"], opt.m["critic.bias"])
    assert not list(tmp_path.glob("ckpt/*.tmp"))


def test_checkpoint_dimension_checks(tmp_path):
    path = save_checkpoint(PolicyNet(Architecture(2, 2, hidden_dim=4)), tmp_path / "p.json")
    with pytest.raises(CheckpointError):
        load_checkpoint(path, action_dim=3)
    with pytest.raises(CheckpointError):
        load_checkpoint(path, obs_dim=5)


def test_checkpoint_rejects_broken_files(tmp_path):
    path = save_checkpoint(PolicyNet(Architecture(2, 2, hidden_dim=4)), tmp_path / "p.json")
    text = path.read_text()
    truncated = tmp_path / "truncated.json"
    truncated.write_text(text[: len(text) // 2])
    with pytest.raises(CheckpointError):
        load_checkpoint(truncated)

    payload = json.loads(text)
    payload["params"]["actor.bias"]["data"] = payload["params"]["actor.bias"]["data"][:1]
    short = tmp_path / "short.json"
    short.write_text(json.dumps(payload))
    with pytest.raises(CheckpointError):
        load_checkpoint(short)

    payload["format"] = "something-else"
    foreign = tmp_path / "foreign.json"
    foreign.write_text(json.dumps(payload))
    with pytest.raises(CheckpointError):
        load_checkpoint(foreign)

    with pytest.raises(CheckpointError):
        load_checkpoint(tmp_path / "missing.json")


@pytest.mark.parametrize(
    "corrupt",
    [
        lambda blob: blob.pop("m"),
        lambda blob: blob.update(lr="fast"),
        lambda blob: blob.update(t=None),
        lambda blob: blob["v"].pop("critic.bias"),
        lambda blob: blob["m"]["critic.bias"].update(shape=[1, 1], data=[0.0]),
    ],
)
def test_checkpoint_rejects_broken_optimizer_block(corrupt, tmp_path):
    net = PolicyNet(Architecture(2, 2, hidden_dim=4))
    path = save_checkpoint(net, tmp_path / "p.json", Adam(net.params, lr=1e-3), {"epoch": 1})
    payload = json.loads(path.read_text())
    corrupt(payload["optimizer"])
    path.write_text(json.dumps(payload))
    with pytest.raises(CheckpointError, match="optimizer"):
        load_checkpoint(path)


def test_checkpoint_rejects_non_object_trainer_block(tmp_path):
    path = save_checkpoint(PolicyNet(Architecture(2, 2, hidden_dim=4)), tmp_path / "p.json")
    payload = json.loads(path.read_text())
    payload["trainer"] = [1]
    path.write_text(json.dumps(payload))
    with pytest.raises(CheckpointError):
        load_checkpoint(path)
