"""Multi-objective Q-learning for multi-microgrid dynamic pricing and storage dispatch."""
__version__ = "0.1.0"
