"""The simulated world: agents on a torus, undirected links and the run PRNG."""

import hashlib
import json
from types import MappingProxyType
from typing import Dict, Iterator, List, Mapping, Optional, Set, Tuple

import numpy as np
from numpy.random import PCG64, Generator

from ..data_structure.constants import AgentId, Link, Point, Scalar, default_height, default_width

__all__ = ['SimAgent', 'World', 'make_rng', 'toroidal_distance', 'neighbors_within', 'wrap_coordinate']


def make_rng(seed: int) -> Generator:
    """The run PRNG: numpy's PCG64 (128-bit state, 64-bit output), seeded with a
    64-bit unsigned integer.

    PCG64 output for a given seed is fixed by numpy across platforms, which
    keeps traces reproducible.
    """
    return Generator(PCG64(seed))


def clone_rng(rng: Generator) -> Generator:
    bit_generator = PCG64()
    bit_generator.state = rng.bit_generator.state
    return Generator(bit_generator)


def wrap_coordinate(value: float, dim: float) -> float:
    """Wrap a coordinate onto ``[0, dim)``."""
    value = value % dim
    # (-tiny) % dim rounds up to dim
    if value >= dim:
        value = 0.0
    return float(value)


def _axis_delta(a: float, b: float, dim: float) -> float:
    delta = abs(a - b)
    return min(delta, dim - delta)


def toroidal_distance(a: Point, b: Point, dims: Tuple[float, float]) -> float:
    """Euclidean distance under wrap-around.

    Args:
        a (Point): first point, inside the world rectangle.
        b (Point): second point, inside the world rectangle.
        dims (Tuple[float, float]): (width, height) of the world.

    Returns:
        float: distance, never more than half the world diagonal.
    """
    dx = _axis_delta(a[0], b[0], dims[0])
    dy = _axis_delta(a[1], b[1], dims[1])
    # same operations as the vectorized path in `neighbors_within`, so both agree bit for bit
    return float(np.sqrt(dx * dx + dy * dy))


class SimAgent:
    """An agent of the simulation model.

    ``kind`` is fixed at creation, and so is the set of attribute keys; only the
    values may change.
    """

    __slots__ = ('_id', '_kind', 'x', 'y', '_attributes')

    def __init__(self, agent_id: AgentId, kind: str, x: float, y: float, attributes: Mapping[str, Scalar]) -> None:
        self._id = agent_id
        self._kind = kind
        self.x = float(x)
        self.y = float(y)
        self._attributes: Dict[str, Scalar] = dict(attributes)

    @property
    def id(self) -> AgentId:
        return self._id

    @property
    def kind(self) -> str:
        return self._kind

    @property
    def attributes(self) -> Mapping[str, Scalar]:
        """Read-only view of the attribute table."""
        return MappingProxyType(self._attributes)

    @property
    def position(self) -> Point:
        return (self.x, self.y)

    def __getitem__(self, attr: str) -> Scalar:
        return self._attributes[attr]

    def __setitem__(self, attr: str, value: Scalar) -> None:
        if attr not in self._attributes:
            raise KeyError(f'Agent {self._id} ({self._kind}) has no attribute "{attr}"')
        self._attributes[attr] = value

    def read(self, attr: str) -> Scalar:
        """Read an intrinsic (``id``, ``kind``, ``x``, ``y``) or model attribute.

        Raises:
            KeyError: If the agent has no such attribute.
        """
        if attr == 'id':
            return self._id
        if attr == 'kind':
            return self._kind
        if attr == 'x':
            return self.x
        if attr == 'y':
            return self.y
        return self._attributes[attr]

    def copy(self) -> 'SimAgent':
        return SimAgent(self._id, self._kind, self.x, self.y, self._attributes)

    def snapshot(self) -> Dict:
        return {
            'id': self._id,
            'kind': self._kind,
            'x': self.x,
            'y': self.y,
            'attributes': dict(sorted(self._attributes.items())),
        }

    def __repr__(self) -> str:
        return f'<SimAgent {self._id} "{self._kind}" at ({self.x:.3f}, {self.y:.3f})>'


class World:
    """Deterministic discrete-tick world on a ``width x height`` torus.

    Agents are always iterated in ascending id, whatever order they were stored in.
    Removals requested during a tick are queued and applied by
    :meth:`apply_removals` at the end of the tick.
    """

    def __init__(
        self,
        width: float = default_width,
        height: float = default_height,
        model: str = '',
        params: Optional[Mapping] = None,
        rng: Optional[Generator] = None,
        tick: int = 0,
    ) -> None:
        self.width = float(width)
        self.height = float(height)
        self.model = model
        self.params: Dict = dict(params or {})
        self.rng = rng if rng is not None else make_rng(0)
        self.tick = tick
        self._agents: Dict[AgentId, SimAgent] = {}
        self._order: Optional[Tuple[SimAgent, ...]] = None
        self._links: Set[Link] = set()
        self._next_id: AgentId = 0
        self._pending_removals: Set[AgentId] = set()
        self.events: List[Tuple[str, AgentId, str]] = []

    @property
    def dims(self) -> Tuple[float, float]:
        return (self.width, self.height)

    # ------ agents ------ #
    @property
    def agents(self) -> Tuple[SimAgent, ...]:
        """Live agents in ascending id."""
        if self._order is None:
            self._order = tuple(self._agents[agent_id] for agent_id in sorted(self._agents))
        return self._order

    def __len__(self) -> int:
        return len(self._agents)

    def __contains__(self, agent_id: AgentId) -> bool:
        return agent_id in self._agents

    def __iter__(self) -> Iterator[SimAgent]:
        return iter(self.agents)

    def get(self, agent_id: AgentId) -> SimAgent:
        return self._agents[agent_id]

    def spawn(self, kind: str, x: float, y: float, **attributes: Scalar) -> SimAgent:
        """Create an agent with a fresh id; ids are never reused within a run."""
        agent = SimAgent(self._next_id, kind, wrap_coordinate(x, self.width), wrap_coordinate(y, self.height), attributes)
        self._next_id += 1
        self.insert(agent)
        self.events.append(('spawn', agent.id, kind))
        return agent

    def insert(self, agent: SimAgent) -> None:
        """Store an existing agent (used when rebuilding worlds); ids must be unique."""
        if agent.id in self._agents:
            raise ValueError(f'Agent id {agent.id} already exists')
        self._agents[agent.id] = agent
        self._next_id = max(self._next_id, agent.id + 1)
        self._order = None

    def remove(self, agent_id: AgentId) -> None:
        """Queue an agent for removal at the end of the tick."""
        if agent_id not in self._agents:
            raise KeyError(f'No live agent with id {agent_id}')
        self._pending_removals.add(agent_id)

    def is_removed(self, agent_id: AgentId) -> bool:
        return agent_id in self._pending_removals

    def apply_removals(self) -> List[AgentId]:
        """Drop queued agents and purge their links."""
        removed = sorted(self._pending_removals)
        for agent_id in removed:
            agent = self._agents.pop(agent_id)
            self.events.append(('remove', agent_id, agent.kind))
        if removed:
            dead = set(removed)
            self._links = {link for link in self._links if link[0] not in dead and link[1] not in dead}
            self._order = None
        self._pending_removals.clear()
        return removed

    # ------ links ------ #
    @property
    def links(self) -> List[Link]:
        """Undirected links as sorted ``(low, high)`` id pairs."""
        return sorted(self._links)

    def add_link(self, a: AgentId, b: AgentId) -> None:
        if a == b:
            raise ValueError('Self links are not allowed')
        if a not in self._agents or b not in self._agents:
            raise KeyError(f'Link ({a}, {b}) refers to a missing agent')
        self._links.add((min(a, b), max(a, b)))

    def remove_link(self, a: AgentId, b: AgentId) -> None:
        self._links.discard((min(a, b), max(a, b)))

    # ------ geometry ------ #
    def positions(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Arrays of (ids, xs, ys) in ascending id."""
        agents = self.agents
        ids = np.fromiter((agent.id for agent in agents), dtype=np.int64, count=len(agents))
        xs = np.fromiter((agent.x for agent in agents), dtype=np.float64, count=len(agents))
        ys = np.fromiter((agent.y for agent in agents), dtype=np.float64, count=len(agents))
        return ids, xs, ys

    def contains_point(self, point: Point) -> bool:
        return 0.0 <= point[0] < self.width and 0.0 <= point[1] < self.height

    # ------ bookkeeping ------ #
    def copy(self) -> 'World':
        """Independent copy, PRNG state included."""
        other = World(self.width, self.height, self.model, self.params, clone_rng(self.rng), self.tick)
        other._agents = {agent_id: agent.copy() for agent_id, agent in self._agents.items()}
        other._links = set(self._links)
        other._next_id = self._next_id
        other._pending_removals = set(self._pending_removals)
        return other

    def check_integrity(self) -> List[str]:
        """Full scan of the world invariants; returns the problems found."""
        problems = []
        for agent in self.agents:
            if not self.contains_point(agent.position):
                problems.append(f'agent {agent.id} outside the world at {agent.position}')
            if agent.id >= self._next_id:
                problems.append(f'agent {agent.id} has an id that was never issued')
        for a, b in self._links:
            if a not in self._agents or b not in self._agents:
                problems.append(f'link ({a}, {b}) refers to a dead agent')
        return problems

    def snapshot(self) -> Dict:
        return {
            'tick': self.tick,
            'dims': [self.width, self.height],
            'agents': [agent.snapshot() for agent in self.agents],
            'links': [list(link) for link in self.links],
        }

    def state_digest(self) -> str:
        """SHA-256 of the full world state, PRNG state included."""
        state = self.snapshot()
        state['rng'] = self.rng.bit_generator.state
        payload = json.dumps(state, sort_keys=True, separators=(',', ':'), default=str)
        return hashlib.sha256(payload.encode('utf-8')).hexdigest()

    @classmethod
    def from_snapshot(
        cls, tick: int, dims: Tuple[float, float], agents: List[Dict], links: List[List[int]], model: str = ''
    ) -> 'World':
        """Rebuild a read-only view from recorded state (no PRNG history)."""
        world = cls(dims[0], dims[1], model=model, tick=tick)
        for record in agents:
            world.insert(
                SimAgent(record['id'], record['kind'], record['x'], record['y'], record.get('attributes', {}))
            )
        for a, b in links:
            world._links.add((min(a, b), max(a, b)))
        return world

    def __repr__(self) -> str:
        return f'<World "{self.model}" tick={self.tick} agents={len(self)} links={len(self._links)}>'


def neighbors_within(
    world: World, center: Point, radius: float, kind_filter: Optional[str] = None
) -> List[AgentId]:
    """Agents whose toroidal distance to ``center`` is at most ``radius``.

    Args:
        world (World): the world to search.
        center (Point): query point.
        radius (float): search radius, >= 0; the boundary is inclusive.
        kind_filter (Optional[str], optional): keep only agents of this kind. Defaults to None.

    Returns:
        List[AgentId]: matching ids, ascending.
    """
    if radius < 0:
        raise ValueError(f'radius must be >= 0, got {radius}')
    ids, xs, ys = world.positions()
    if len(ids) == 0:
        return []
    dx = np.abs(xs - center[0])
    dx = np.minimum(dx, world.width - dx)
    dy = np.abs(ys - center[1])
    dy = np.minimum(dy, world.height - dy)
    inside = np.sqrt(dx * dx + dy * dy) <= radius
    if kind_filter is not None:
        kinds = np.array([agent.kind == kind_filter for agent in world.agents], dtype=bool)
        inside &= kinds
    return [int(agent_id) for agent_id in ids[inside]]
