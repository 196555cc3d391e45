"""Link-graph connectivity of the agents in a world."""

from typing import Dict, Iterable, List, Optional

from ..data_structure.constants import AgentId
from ..data_structure.models import ComponentReport
from ..engine.world import World

__all__ = ['UnionFind', 'connected_components', 'components_of']


class UnionFind:
    """Disjoint sets over arbitrary agent ids, union by rank with path compression."""

    def __init__(self, items: Iterable[AgentId]) -> None:
        self.parents: Dict[AgentId, AgentId] = {item: item for item in items}
        self.rank: Dict[AgentId, int] = {item: 0 for item in self.parents}

    def find(self, x: AgentId) -> AgentId:
        root = x
        while self.parents[root] != root:
            root = self.parents[root]
        while self.parents[x] != root:
            self.parents[x], x = root, self.parents[x]
        return root

    def union(self, x: AgentId, y: AgentId) -> None:
        x, y = self.find(x), self.find(y)
        if x == y:
            return
        if self.rank[x] < self.rank[y]:
            x, y = y, x
        self.parents[y] = x
        if self.rank[x] == self.rank[y]:
            self.rank[x] += 1

    def sizes(self) -> List[int]:
        counts: Dict[AgentId, int] = {}
        for item in self.parents:
            root = self.find(item)
            counts[root] = counts.get(root, 0) + 1
        return sorted(counts.values(), reverse=True)


def components_of(view: World, ids: Iterable[AgentId]) -> ComponentReport:
    """Components of the link graph induced on ``ids``; links leaving the set are ignored.

    An empty set reports zero components and a largest fraction of 1.0, so
    ``largest_component_fraction(agents) == 1.0`` holds on an empty world.
    """
    members = UnionFind(ids)
    for a, b in view.links:
        if a in members.parents and b in members.parents:
            members.union(a, b)
    sizes = members.sizes()
    total = sum(sizes)
    return ComponentReport(
        component_count=len(sizes),
        component_sizes=sizes,
        largest_fraction=sizes[0] / total if total else 1.0,
    )


def connected_components(view: World, kind_filter: Optional[str] = None) -> ComponentReport:
    """Components of the undirected link graph restricted to agents of ``kind_filter`` (all agents if None)."""
    ids = [agent.id for agent in view.agents if kind_filter is None or agent.kind == kind_filter]
    return components_of(view, ids)
