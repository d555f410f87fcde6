"""tmzero: self-play reinforcement learning for two-player Terra Mystica."""

__version__ = "0.1.0"
