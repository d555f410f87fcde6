"""Multi-head residual policy/value network.

Architecture: a 3x3 convolution tower over the (206, 9, 26) input,
`blocks` residual units, then three heads sharing a policy trunk that
halves the doubled board back to 9 x 13:

  * main policy: trunk conv (1x2, stride (1,2), 64 filters) + BN + ReLU,
    flatten, FC -> 2,138 logits (softmax);
  * town policy: trunk, 1x1 conv to one channel + BN + ReLU, flatten,
    FC -> 5 logits (softmax, normalized independently);
  * value: 1x1 conv (32 filters) + BN + ReLU, FC -> 264, ReLU, FC -> 1,
    tanh.

Loss: mean over the batch of (z - v)^2 - pi_main . log p_main -
[town valid] * pi_town . log p_town, plus L2 over convolution/linear
weights (batch-norm parameters excluded). Optimizer: SGD with momentum.

Parameter count (closed form, k = filters, B = blocks, C = 206 input
layers): tower 9*C*k + k + 2k (BN); each residual block 2*(9*k^2 + k)
+ 4k; policy trunk 2*k*64 + 64 + 128; main FC 9*13*64*2138 + 2138;
town head 64 + 1 + 2 + (117 + 1) * 5; value head 32*k + 32 + 64 +
(9*26*32 + 1) * 264 + 265.
"""

from __future__ import annotations

import hashlib
import io
from dataclasses import asdict, dataclass, field

import numpy as np
import torch
import torch.nn as nn
import torch.nn.functional as F

from .encoding import NUM_LAYERS, layout_hash
from .rules.actions import NUM_MAIN_ACTIONS, NUM_TOWN_ACTIONS

INPUT_SHAPE = (9, 26, NUM_LAYERS)


@dataclass(frozen=True)
class NetworkConfig:
    blocks: int = 19
    filters: int = 256
    policy_filters: int = 64
    value_filters: int = 32
    value_fc_width: int = 264
    l2_coeff: float = 1e-4
    learning_rate: float = 0.01
    momentum: float = 0.9

    def __post_init__(self):
        for name in ("blocks", "filters", "policy_filters", "value_filters",
                     "value_fc_width"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")

    @classmethod
    def desk_scale(cls, **overrides) -> "NetworkConfig":
        """Small preset sized so the full test suite runs on a laptop CPU."""
        kw = dict(blocks=2, filters=32, policy_filters=8, value_filters=8,
                  value_fc_width=64)
        kw.update(overrides)
        return cls(**kw)


def _init_module(m: nn.Module) -> None:
    """Fan-in scaled normal weights (unit pre-activation variance on
    unit-variance input), zero biases, identity batch norm."""
    if isinstance(m, (nn.Conv2d, nn.Linear)):
        fan_in = nn.init._calculate_correct_fan(m.weight, "fan_in")
        nn.init.normal_(m.weight, std=fan_in ** -0.5)
        if m.bias is not None:
            nn.init.zeros_(m.bias)
    elif isinstance(m, nn.BatchNorm2d):
        nn.init.ones_(m.weight)
        nn.init.zeros_(m.bias)


class ResidualBlock(nn.Module):
    def __init__(self, filters: int):
        super().__init__()
        self.conv1 = nn.Conv2d(filters, filters, 3, padding=1)
        self.bn1 = nn.BatchNorm2d(filters)
        self.conv2 = nn.Conv2d(filters, filters, 3, padding=1)
        self.bn2 = nn.BatchNorm2d(filters)

    def forward(self, x):
        y = F.relu(self.bn1(self.conv1(x)))
        y = self.bn2(self.conv2(y))
        return F.relu(x + y)


class PolicyValueNet(nn.Module):
    """Forward over NCHW input (B, 206, 9, 26); outputs are probability
    rows for both policy heads and a tanh-bounded scalar value."""

    def __init__(self, config: NetworkConfig):
        super().__init__()
        self.config = config
        k = config.filters
        self.tower_conv = nn.Conv2d(NUM_LAYERS, k, 3, padding=1)
        self.tower_bn = nn.BatchNorm2d(k)
        self.blocks = nn.ModuleList(
            ResidualBlock(k) for _ in range(config.blocks))
        pf = config.policy_filters
        # 2-wide stride-2 kernel along the horizontal axis only: 26 -> 13.
        self.policy_conv = nn.Conv2d(k, pf, kernel_size=(1, 2), stride=(1, 2))
        self.policy_bn = nn.BatchNorm2d(pf)
        self.main_fc = nn.Linear(9 * 13 * pf, NUM_MAIN_ACTIONS)
        self.town_conv = nn.Conv2d(pf, 1, 1)
        self.town_bn = nn.BatchNorm2d(1)
        self.town_fc = nn.Linear(9 * 13, NUM_TOWN_ACTIONS)
        vf = config.value_filters
        self.value_conv = nn.Conv2d(k, vf, 1)
        self.value_bn = nn.BatchNorm2d(vf)
        self.value_fc1 = nn.Linear(9 * 26 * vf, config.value_fc_width)
        self.value_fc2 = nn.Linear(config.value_fc_width, 1)
        self.apply(_init_module)

    def forward(self, x: torch.Tensor):
        if x.dim() != 4 or x.shape[1:] != (NUM_LAYERS, 9, 26):
            raise ValueError(f"expected (B, {NUM_LAYERS}, 9, 26) input, "
                             f"got {tuple(x.shape)}")
        y = F.relu(self.tower_bn(self.tower_conv(x)))
        for block in self.blocks:
            y = block(y)
        trunk = F.relu(self.policy_bn(self.policy_conv(y)))
        p_main = F.softmax(self.main_fc(trunk.flatten(1)), dim=1)
        town = F.relu(self.town_bn(self.town_conv(trunk)))
        p_town = F.softmax(self.town_fc(town.flatten(1)), dim=1)
        v = F.relu(self.value_bn(self.value_conv(y)))
        v = F.relu(self.value_fc1(v.flatten(1)))
        v = torch.tanh(self.value_fc2(v))
        return p_main, p_town, v


@dataclass
class Network:
    """Model + optimizer + step counter, with deterministic seeding and
    bit-exact checkpointing."""

    config: NetworkConfig
    model: PolicyValueNet
    optimizer: torch.optim.SGD
    step: int = 0

    @classmethod
    def init(cls, config: NetworkConfig, seed: int = 0) -> "Network":
        torch.manual_seed(seed)
        model = PolicyValueNet(config).double()
        optimizer = torch.optim.SGD(model.parameters(),
                                    lr=config.learning_rate,
                                    momentum=config.momentum)
        return cls(config=config, model=model, optimizer=optimizer)

    def forward(self, x: np.ndarray, train: bool = False):
        """Evaluate a batch of (B, 9, 26, 206) state tensors. Inference
        mode (train=False) freezes batch-norm statistics so MCTS
        evaluation is deterministic."""
        t = torch.from_numpy(np.ascontiguousarray(x)).double()
        t = t.permute(0, 3, 1, 2)
        if train:
            self.model.train()
            return self.model(t)
        self.model.eval()
        with torch.no_grad():
            return self.model(t)

    def loss(self, batch: dict, train: bool = True) -> torch.Tensor:
        x = torch.from_numpy(np.ascontiguousarray(batch["x"])).double()
        x = x.permute(0, 3, 1, 2)
        pi_main = torch.from_numpy(batch["pi_main"]).double()
        pi_town = torch.from_numpy(batch["pi_town"]).double()
        town_valid = torch.from_numpy(batch["town_valid"]).double()
        z = torch.from_numpy(batch["z"]).double()
        self.model.train(train)
        p_main, p_town, v = self.model(x)
        eps = 1e-12
        value_term = (z - v.squeeze(1)) ** 2
        main_term = -(pi_main * torch.log(p_main + eps)).sum(dim=1)
        town_term = -town_valid * (pi_town * torch.log(p_town + eps)).sum(dim=1)
        total = (value_term + main_term + town_term).mean()
        if self.config.l2_coeff > 0:
            l2 = sum((m.weight ** 2).sum()
                     for m in self.model.modules()
                     if isinstance(m, (nn.Conv2d, nn.Linear)))
            total = total + self.config.l2_coeff * l2
        return total

    def train_step(self, batch: dict, lr: float | None = None) -> float:
        """One synchronous SGD-with-momentum update; returns the loss."""
        if lr is not None:
            for group in self.optimizer.param_groups:
                group["lr"] = lr
        loss = self.loss(batch, train=True)
        self.optimizer.zero_grad()
        loss.backward()
        self.optimizer.step()
        self.step += 1
        return float(loss.detach())

    def parameter_count(self) -> int:
        return sum(p.numel() for p in self.model.parameters())

    def save(self, path: str) -> None:
        torch.save({
            "config": asdict(self.config),
            "model": self.model.state_dict(),
            "optimizer": self.optimizer.state_dict(),
            "step": self.step,
            "layout_hash": layout_hash(),
        }, path)

    @classmethod
    def load(cls, path: str) -> "Network":
        blob = torch.load(path, weights_only=False)
        if blob["layout_hash"] != layout_hash():
            raise ValueError(
                "checkpoint layer-layout hash does not match this codec")
        config = NetworkConfig(**blob["config"])
        net = cls.init(config)
        net.model.load_state_dict(blob["model"])
        net.optimizer.load_state_dict(blob["optimizer"])
        net.step = blob["step"]
        return net

    def weights_digest(self) -> str:
        """Stable digest of all parameters and buffers, for bit-identity
        checks between training runs."""
        h = hashlib.sha256()
        for name, tensor in sorted(self.model.state_dict().items()):
            h.update(name.encode())
            h.update(tensor.detach().cpu().numpy().tobytes())
        return h.hexdigest()


class NetworkEvaluator:
    """Adapts a Network to the MCTS Evaluator protocol (inference mode,
    batch of one). Not safe for concurrent evaluate() calls."""

    concurrent_safe = False

    def __init__(self, net: Network):
        self.net = net

    def evaluate(self, state):
        from .encoding import encode_state

        x = encode_state(state)[None]
        p_main, p_town, v = self.net.forward(x, train=False)
        return (p_main[0].numpy(), p_town[0].numpy(), float(v[0, 0]))
