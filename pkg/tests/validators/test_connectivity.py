import pytest

from vomasim.engine import World
from vomasim.validators import UnionFind, components_of, connected_components

from ..oracles import bfs_components


def _linked_world(rng, n: int, n_links: int) -> World:
    world = World(model='test')
    for i in range(n):
        world.spawn('a' if i % 4 else 'b', 0.0, 0.0)
    for _ in range(n_links):
        a, b = (int(v) for v in rng.choice(n, size=2, replace=False))
        world.add_link(a, b)
    return world


@pytest.mark.parametrize('n, n_links', [(1, 0), (10, 3), (40, 20), (40, 60), (80, 200)])
def test_components_match_breadth_first_search(rng, n, n_links):
    world = _linked_world(rng, n, n_links)
    report = connected_components(world)
    sizes = bfs_components([a.id for a in world.agents], world.links)
    assert report.component_sizes == sizes, f'{report.component_sizes} != {sizes}'
    assert report.component_count == len(sizes)
    assert report.largest_fraction == sizes[0] / n


def test_kind_filter_drops_links_leaving_the_set(rng):
    world = _linked_world(rng, 40, 50)
    report = connected_components(world, kind_filter='a')
    ids = [a.id for a in world.agents if a.kind == 'a']
    assert report.component_sizes == bfs_components(ids, world.links)
    assert components_of(world, ids) == report


def test_empty_set():
    report = components_of(World(), [])
    assert (report.component_count, report.component_sizes, report.largest_fraction) == (0, [], 1.0)


def test_union_find():
    uf = UnionFind([3, 7, 9, 11])
    uf.union(3, 7)
    uf.union(9, 7)
    assert uf.find(9) == uf.find(3)
    assert uf.find(11) == 11
    assert uf.sizes() == [3, 1]
