"""Publishing researchers.

Each researcher prefers a venue policy and submits one paper per tick; accepted
papers raise its publication count, and its height in the world shows that count.

PRNG consumption per tick, researchers in ascending id: a researcher without
preference first draws ``random() < 0.5`` (conference, otherwise journal); every
researcher then draws ``random() < p`` for acceptance. The tick-0 population draws
one ``uniform(0, width)`` per researcher for x.
"""

import numpy as np
from pydantic import Field

from ..data_structure.constants import AttrType, Policy, policy_colors
from ..engine.registry import WorldParams, register_model
from ..engine.world import SimAgent, World

__all__ = ['ResearchersParams', 'RESEARCHER_ATTRIBUTES', 'populate_researchers', 'step_researchers', 'height_of']

POLICIES = (Policy.conference.value, Policy.journal.value, Policy.none.value)
RESEARCHER_ATTRIBUTES = {'policy': AttrType.sym, 'pubs': AttrType.num, 'color': AttrType.sym}


class ResearchersParams(WorldParams):
    n_researchers: int = Field(default=30, ge=1, description='Population size; policies are assigned round-robin.')
    p_conf: float = Field(default=0.25, ge=0.0, le=1.0, description='Acceptance probability of a conference paper.')
    p_journal: float = Field(default=0.10, ge=0.0, le=1.0, description='Acceptance probability of a journal paper.')
    y_scale: float = Field(default=1.0, ge=0.0, description='Height gained per publication.')


def height_of(pubs: int, params: ResearchersParams) -> float:
    """Height of a researcher with ``pubs`` publications, kept strictly below the world's top edge."""
    return min(pubs * params.y_scale, float(np.nextafter(params.height, 0.0)))


def populate_researchers(world: World, params: ResearchersParams) -> None:
    for index in range(params.n_researchers):
        policy = POLICIES[index % len(POLICIES)]
        x = float(world.rng.uniform(0.0, params.width))
        world.spawn('researcher', x, height_of(0, params), policy=policy, pubs=0, color=policy_colors[policy])


def color_of(agent: SimAgent) -> str:
    return agent['color']


@register_model('researchers', ResearchersParams, RESEARCHER_ATTRIBUTES, populate_researchers, color_of, ['researcher'])
def step_researchers(world: World, params: ResearchersParams) -> None:
    rng = world.rng
    for agent in world.agents:
        venue = agent['policy']
        if venue == Policy.none.value:
            venue = Policy.conference.value if rng.random() < 0.5 else Policy.journal.value
        p = params.p_conf if venue == Policy.conference.value else params.p_journal
        if rng.random() < p:
            agent['pubs'] = agent['pubs'] + 1
            agent.y = height_of(agent['pubs'], params)
