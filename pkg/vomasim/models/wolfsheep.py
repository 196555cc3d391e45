"""Wolf-sheep predation, without grass.

PRNG consumption: the tick-0 population draws ``uniform(0, width)`` and
``uniform(0, height)`` per sheep, then the same per wolf followed by
``uniform(0, 2 * energy_gain)`` for its energy unless ``initial_energy`` is set.
Each tick, every animal alive at the start of the tick and not eaten yet, in
ascending id, draws a heading ``uniform(0, 2 pi)`` and then, if it survives,
one ``random()`` for reproduction. Animals born during a tick act from the next
one, but newborn sheep may already be eaten.
"""

import math
from typing import Optional

from pydantic import Field

from ..data_structure.constants import AttrType
from ..engine.registry import WorldParams, register_model
from ..engine.world import SimAgent, World, neighbors_within, toroidal_distance, wrap_coordinate

__all__ = ['WolfSheepParams', 'WOLFSHEEP_ATTRIBUTES', 'populate_wolfsheep', 'step_wolfsheep']

WOLFSHEEP_ATTRIBUTES = {'energy': AttrType.num}
_COLORS = {'wolf': 'black', 'sheep': 'white'}


class WolfSheepParams(WorldParams):
    n_sheep: int = Field(default=100, ge=0, description='Initial sheep.')
    n_wolves: int = Field(default=15, ge=0, description='Initial wolves.')
    move_step: float = Field(default=1.0, ge=0.0, description='Distance moved per tick.')
    eat_radius: float = Field(default=1.0, ge=0.0, description='A wolf eats sheep within this distance.')
    energy_gain: float = Field(default=20.0, ge=0.0, description='Energy a wolf gains per sheep eaten.')
    energy_cost: float = Field(default=1.0, ge=0.0, description='Energy a wolf spends per tick.')
    wolf_repro: float = Field(default=0.05, ge=0.0, le=1.0, description='Reproduction probability of a wolf.')
    sheep_repro: float = Field(default=0.04, ge=0.0, le=1.0, description='Reproduction probability of a sheep.')
    initial_energy: Optional[float] = Field(
        default=None, gt=0.0, description='Initial wolf energy; drawn from uniform(0, 2 * energy_gain) if unset.'
    )


def populate_wolfsheep(world: World, params: WolfSheepParams) -> None:
    rng = world.rng
    for _ in range(params.n_sheep):
        x = float(rng.uniform(0.0, params.width))
        y = float(rng.uniform(0.0, params.height))
        world.spawn('sheep', x, y)
    for _ in range(params.n_wolves):
        x = float(rng.uniform(0.0, params.width))
        y = float(rng.uniform(0.0, params.height))
        if params.initial_energy is None:
            energy = float(rng.uniform(0.0, 2 * params.energy_gain))
        else:
            energy = float(params.initial_energy)
        world.spawn('wolf', x, y, energy=energy)


def color_of(agent: SimAgent) -> str:
    return _COLORS.get(agent.kind, 'gray')


def _prey_of(world: World, wolf: SimAgent, params: WolfSheepParams) -> Optional[SimAgent]:
    """Nearest uneaten sheep within the eat radius; ties go to the lowest id."""
    best = None
    for sheep_id in neighbors_within(world, wolf.position, params.eat_radius, 'sheep'):
        if world.is_removed(sheep_id):
            continue
        distance = toroidal_distance(wolf.position, world.get(sheep_id).position, world.dims)
        if best is None or distance < best[0]:
            best = (distance, sheep_id)
    return world.get(best[1]) if best is not None else None


@register_model('wolfsheep', WolfSheepParams, WOLFSHEEP_ATTRIBUTES, populate_wolfsheep, color_of, ['wolf', 'sheep'])
def step_wolfsheep(world: World, params: WolfSheepParams) -> None:
    rng = world.rng
    for agent in world.agents:
        if world.is_removed(agent.id):
            continue
        heading = float(rng.uniform(0.0, 2 * math.pi))
        agent.x = wrap_coordinate(agent.x + params.move_step * math.cos(heading), world.width)
        agent.y = wrap_coordinate(agent.y + params.move_step * math.sin(heading), world.height)

        if agent.kind == 'wolf':
            prey = _prey_of(world, agent, params)
            if prey is not None:
                world.remove(prey.id)
                agent['energy'] = agent['energy'] + params.energy_gain
            agent['energy'] = agent['energy'] - params.energy_cost
            if agent['energy'] <= 0:
                world.remove(agent.id)
                continue
            if rng.random() < params.wolf_repro:
                world.spawn('wolf', agent.x, agent.y, energy=float(params.energy_gain))
        elif rng.random() < params.sheep_repro:
            world.spawn('sheep', agent.x, agent.y)
