"""Natural-language counterfactual rendering for uncertain-action DINEs."""
from __future__ import annotations

from typing import Sequence

from .types import DominanceChart, UncertainActionDine

TEMPLATE = (
    "To reach the goal {contrastive_channel}, I should actually choose action "
    "{contrastive_action}. However, it is currently more important to choose action "
    "{chosen_action} to achieve the goal {dominant_channel}."
)


def render_counterfactual(dine: UncertainActionDine, chart: DominanceChart,
                          channel_names: Sequence[str], action_names: Sequence[str]) -> str:
    """One paragraph per contrastive entry, in channel order, blank-line separated."""
    if dine.timestep != chart.timestep:
        raise ValueError(
            f"dine is for timestep {dine.timestep} but dominance chart for {chart.timestep}"
        )

    def channel(i: int) -> str:
        if not 0 <= i < len(channel_names):
            raise ValueError(f"unknown channel index {i}")
        return channel_names[i]

    def action(i: int) -> str:
        if not 0 <= i < len(action_names):
            raise ValueError(f"unknown action index {i}")
        return action_names[i]

    chosen = action(dine.chosen_action)
    dominant = channel(chart.dominant_channel)
    paragraphs = [
        TEMPLATE.format(
            contrastive_channel=channel(e.channel),
            contrastive_action=action(e.preferred_action),
            chosen_action=chosen,
            dominant_channel=dominant,
        )
        for e in sorted(dine.contrastive, key=lambda e: e.channel)
    ]
    return "\n\n".join(paragraphs)
