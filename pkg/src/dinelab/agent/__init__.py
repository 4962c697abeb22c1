from .core import AggregatedAgent, Decision, Hyperparameters, SubAgent, TrainingDiverged, greedy_action
from .nets import Mlp, chosen_action_loss_and_grads, regression_loss_and_grads
from .replay import ReplayMemory, Transition
from .checkpoint import load_agent, save_agent

__all__ = [
    "AggregatedAgent",
    "Decision",
    "Hyperparameters",
    "Mlp",
    "ReplayMemory",
    "SubAgent",
    "TrainingDiverged",
    "Transition",
    "chosen_action_loss_and_grads",
    "greedy_action",
    "load_agent",
    "regression_loss_and_grads",
    "save_agent",
]
