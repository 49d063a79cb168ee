"""Interaction-limited inverse reinforcement learning: curriculum and self-paced MaxEnt IRL"""

__version__ = "0.1.0"
