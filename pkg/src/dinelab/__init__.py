"""dinelab: a debugging workbench for reward-decomposed online RL.

Trains a decomposed double-DQN agent against a simulated auto-scaling web
application, detects decomposed interestingness elements (DINEs) over the
decision trace, and serves both to an interactive dashboard.
"""

__version__ = "0.1.0"
