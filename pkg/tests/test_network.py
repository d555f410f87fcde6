"""Tests for the policy/value network: shapes, init statistics, the
finite-difference gradient oracle, overfitting, and checkpointing."""

import numpy as np
import pytest
import torch

from tmzero.network import (
    Network,
    NetworkConfig,
    NetworkEvaluator,
    PolicyValueNet,
)
from tmzero.rules.actions import NUM_MAIN_ACTIONS, NUM_TOWN_ACTIONS


def synthetic_batch(n, seed=0):
    """Random states and targets shaped like real training examples."""
    rng = np.random.default_rng(seed)
    x = rng.random((n, 9, 26, 206)).astype(np.float32)
    pi_main = rng.dirichlet(np.ones(NUM_MAIN_ACTIONS), size=n)
    pi_town = rng.dirichlet(np.ones(NUM_TOWN_ACTIONS), size=n)
    town_valid = (rng.random(n) < 0.2).astype(np.float64)
    z = rng.choice([-1.0, 0.0, 1.0], size=n)
    return {"x": x, "pi_main": pi_main.astype(np.float32),
            "pi_town": pi_town.astype(np.float32),
            "town_valid": town_valid, "z": z}


@pytest.fixture(scope="module")
def desk_net():
    return Network.init(NetworkConfig.desk_scale(), seed=0)


class TestForward:
    def test_output_shapes_and_bounds(self, desk_net):
        # [DERIVED] heads (2138, 5, 1); |v| <= 1; softmax rows sum to 1.
        x = synthetic_batch(4)["x"]
        p_main, p_town, v = desk_net.forward(x)
        assert p_main.shape == (4, 2138)
        assert p_town.shape == (4, 5)
        assert v.shape == (4, 1)
        assert float(v.abs().max()) <= 1.0
        assert np.allclose(p_main.sum(dim=1).numpy(), 1.0, atol=1e-6)
        assert np.allclose(p_town.sum(dim=1).numpy(), 1.0, atol=1e-6)

    def test_inference_deterministic(self, desk_net):
        # [DERIVED] eval-mode forward (frozen batch norm) is repeatable.
        x = synthetic_batch(2, seed=1)["x"]
        a = desk_net.forward(x)
        b = desk_net.forward(x)
        for t1, t2 in zip(a, b):
            assert torch.equal(t1, t2)

    def test_rejects_bad_shape(self, desk_net):
        # [TRIVIAL]
        with pytest.raises(ValueError):
            desk_net.model(torch.zeros(1, 206, 9, 13, dtype=torch.double))


class TestInit:
    def test_fan_in_scaled_weights(self):
        # [DERIVED] sampled weight std approximates fan_in^-0.5; batch
        # norm starts as the identity.
        net = Network.init(NetworkConfig.desk_scale(), seed=3)
        conv = net.model.tower_conv
        fan_in = 206 * 9
        assert float(conv.weight.std()) == pytest.approx(
            fan_in ** -0.5, rel=0.05)
        assert float(conv.bias.abs().max()) == 0.0
        bn = net.model.tower_bn
        assert torch.equal(bn.weight, torch.ones_like(bn.weight))
        assert torch.equal(bn.bias, torch.zeros_like(bn.bias))

    def test_seed_determinism(self):
        # [TRIVIAL]
        a = Network.init(NetworkConfig.desk_scale(), seed=5)
        b = Network.init(NetworkConfig.desk_scale(), seed=5)
        assert a.weights_digest() == b.weights_digest()
        c = Network.init(NetworkConfig.desk_scale(), seed=6)
        assert a.weights_digest() != c.weights_digest()

    def test_parameter_count_closed_form(self):
        # [DERIVED] matches the closed form in the module docstring.
        cfg = NetworkConfig.desk_scale()
        k, B, C = cfg.filters, cfg.blocks, 206
        pf, vf, fcw = cfg.policy_filters, cfg.value_filters, cfg.value_fc_width
        expected = (
            9 * C * k + k + 2 * k                      # tower conv + BN
            + B * (2 * (9 * k * k + k) + 4 * k)        # residual blocks
            + 2 * k * pf + pf + 2 * pf                 # policy trunk + BN
            + (9 * 13 * pf + 1) * NUM_MAIN_ACTIONS     # main head FC
            + pf + 1 + 2                               # town 1x1 conv + BN
            + (9 * 13 + 1) * NUM_TOWN_ACTIONS          # town FC
            + vf * k + vf + 2 * vf                     # value conv + BN
            + (9 * 26 * vf + 1) * fcw                  # value FC 1
            + fcw + 1                                  # value FC 2
        )
        net = Network.init(cfg, seed=0)
        assert net.parameter_count() == expected


class TestGradients:
    def test_finite_difference_oracle(self):
        # [DERIVED] autograd gradients agree with central differences on a
        # sample of parameters (double precision, desk-scale config), max
        # relative error < 1e-4.
        torch.manual_seed(0)
        net = Network.init(NetworkConfig.desk_scale(l2_coeff=1e-4), seed=0)
        batch = synthetic_batch(3, seed=7)
        loss = net.loss(batch, train=True)
        net.model.zero_grad()
        loss.backward()
        rng = np.random.default_rng(0)
        params = [p for p in net.model.parameters() if p.grad is not None]
        h = 1e-6
        worst = 0.0
        checked = 0
        for p in params:
            flat = p.data.view(-1)
            grad = p.grad.view(-1)
            for idx in rng.choice(flat.numel(),
                                  size=min(3, flat.numel()), replace=False):
                idx = int(idx)
                orig = float(flat[idx])
                flat[idx] = orig + h
                f_plus = float(net.loss(batch, train=True))
                flat[idx] = orig - h
                f_minus = float(net.loss(batch, train=True))
                flat[idx] = orig
                fd = (f_plus - f_minus) / (2 * h)
                g = float(grad[idx])
                if max(abs(fd), abs(g)) < 1e-6:
                    # Both negligible (e.g. a dead ReLU path): relative
                    # error is meaningless there.
                    continue
                denom = max(abs(fd), abs(g))
                worst = max(worst, abs(fd - g) / denom)
                checked += 1
        assert checked >= 50
        assert worst < 1e-4

    def test_overfit_synthetic_batch(self):
        # [DERIVED] 200 steps on a fixed synthetic set strictly decreases
        # the windowed loss.
        torch.manual_seed(0)
        net = Network.init(NetworkConfig.desk_scale(), seed=1)
        rng = np.random.default_rng(3)
        data = synthetic_batch(512, seed=3)
        losses = []
        for _ in range(200):
            pick = rng.integers(0, 512, size=64)
            batch = {k: v[pick] for k, v in data.items()}
            losses.append(net.train_step(batch))
        first = float(np.mean(losses[:20]))
        last = float(np.mean(losses[-20:]))
        assert last < first


class TestCheckpoint:
    def test_save_load_bit_exact(self, tmp_path):
        # [DERIVED] round trip preserves every parameter and the optimizer.
        net = Network.init(NetworkConfig.desk_scale(), seed=9)
        net.train_step(synthetic_batch(4, seed=1))
        path = str(tmp_path / "ckpt.pt")
        net.save(path)
        other = Network.load(path)
        assert other.weights_digest() == net.weights_digest()
        assert other.step == net.step
        x = synthetic_batch(2, seed=2)["x"]
        for t1, t2 in zip(net.forward(x), other.forward(x)):
            assert torch.equal(t1, t2)

    def test_layout_hash_mismatch_rejected(self, tmp_path):
        # [DERIVED] a checkpoint from a drifted codec must not load.
        net = Network.init(NetworkConfig.desk_scale(), seed=0)
        path = str(tmp_path / "ckpt.pt")
        net.save(path)
        blob = torch.load(path, weights_only=False)
        blob["layout_hash"] = "0" * 64
        torch.save(blob, path)
        with pytest.raises(ValueError):
            Network.load(path)


class TestEvaluator:
    def test_real_state_evaluation(self, desk_net):
        # [DERIVED] evaluator output satisfies the MCTS protocol contract.
        from tmzero.rules import GameConfig, new_game

        ev = NetworkEvaluator(desk_net)
        p_main, p_town, v = ev.evaluate(new_game(GameConfig(seed=0)))
        assert p_main.shape == (NUM_MAIN_ACTIONS,)
        assert p_town.shape == (NUM_TOWN_ACTIONS,)
        assert -1.0 <= v <= 1.0
        assert abs(p_main.sum() - 1.0) < 1e-6
