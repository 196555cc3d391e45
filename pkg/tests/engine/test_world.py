"""
>>> pytest tests/engine/test_world.py
"""
import math

import numpy as np
import pytest

from vomasim.engine import World, make_rng, neighbors_within, toroidal_distance, wrap_coordinate

from ..oracles import nine_image_distance

dims_cases = [(50.0, 50.0), (10.0, 3.5), (1.0, 100.0)]


@pytest.mark.parametrize('dims', dims_cases)
def test_toroidal_distance_matches_nine_images(rng, dims):
    for _ in range(300):
        a = (rng.uniform(0, dims[0]), rng.uniform(0, dims[1]))
        b = (rng.uniform(0, dims[0]), rng.uniform(0, dims[1]))
        got = toroidal_distance(a, b, dims)
        want = nine_image_distance(a, b, dims)
        assert math.isclose(got, want, rel_tol=1e-12, abs_tol=1e-12), f'{a} {b}: {got} != {want}'
        assert got <= math.hypot(dims[0], dims[1]) / 2 + 1e-12, f'distance {got} beyond half diagonal'
        assert got == toroidal_distance(b, a, dims), 'distance is not symmetric'


def test_toroidal_distance_wraps_across_edges():
    assert math.isclose(toroidal_distance((0.5, 0.0), (49.5, 0.0), (50.0, 50.0)), 1.0)
    assert math.isclose(toroidal_distance((0.0, 0.5), (0.0, 49.5), (50.0, 50.0)), 1.0)
    assert toroidal_distance((3.0, 4.0), (3.0, 4.0), (50.0, 50.0)) == 0.0


def test_wrap_coordinate():
    assert wrap_coordinate(50.0, 50.0) == 0.0
    assert wrap_coordinate(-1.0, 50.0) == 49.0
    assert wrap_coordinate(-1e-18, 50.0) == 0.0, 'tiny negatives round onto the lower edge'
    assert wrap_coordinate(101.5, 50.0) == 1.5


def _random_world(rng, n=120, dims=(20.0, 15.0)) -> World:
    world = World(*dims, model='test')
    for i in range(n):
        world.spawn('a' if i % 2 else 'b', rng.uniform(0, dims[0]), rng.uniform(0, dims[1]))
    return world


@pytest.mark.parametrize('radius', [0.0, 0.5, 2.0, 7.5, 30.0])
def test_neighbors_within_matches_full_scan(rng, radius):
    world = _random_world(rng)
    for _ in range(20):
        center = (rng.uniform(0, world.width), rng.uniform(0, world.height))
        got = neighbors_within(world, center, radius)
        want = [a.id for a in world.agents if toroidal_distance(center, a.position, world.dims) <= radius]
        assert got == want, f'center={center} radius={radius}: {got} != {want}'
        kinds = neighbors_within(world, center, radius, kind_filter='a')
        assert kinds == [i for i in want if world.get(i).kind == 'a'], 'kind filter mismatch'


def test_neighbors_within_boundary_is_inclusive():
    world = World(10.0, 10.0)
    world.spawn('a', 3.0, 0.0)
    world.spawn('a', 9.0, 5.0)
    assert neighbors_within(world, (0.0, 0.0), 3.0) == [0]
    assert neighbors_within(world, (1.0, 5.0), 2.0) == [1], 'wrap-around neighbour missing'
    assert neighbors_within(World(), (1.0, 1.0), 5.0) == []
    with pytest.raises(ValueError):
        neighbors_within(world, (0.0, 0.0), -1.0)


def test_agents_iterate_in_ascending_id_and_ids_are_fresh():
    world = World(10.0, 10.0)
    for i in range(5):
        world.spawn('a', i, i, energy=1.0)
    world.remove(2)
    assert world.is_removed(2)
    assert 2 in world, 'removal is deferred to the end of the tick'
    assert world.apply_removals() == [2]
    born = world.spawn('a', 0.0, 0.0, energy=1.0)
    assert born.id == 5, f'ids are never reused, got {born.id}'
    assert [a.id for a in world] == [0, 1, 3, 4, 5]
    assert world.events[-2:] == [('remove', 2, 'a'), ('spawn', 5, 'a')]


def test_attribute_keys_are_fixed():
    world = World()
    agent = world.spawn('a', 1.0, 1.0, energy=2.0)
    agent['energy'] = 3.0
    assert agent.read('energy') == 3.0
    assert agent.read('kind') == 'a' and agent.read('id') == 0
    with pytest.raises(KeyError):
        agent['hunger'] = 1.0
    with pytest.raises(KeyError):
        agent.read('hunger')


def test_links_are_undirected_and_purged_with_their_agents():
    world = World()
    for _ in range(3):
        world.spawn('a', 0.0, 0.0)
    world.add_link(2, 0)
    world.add_link(1, 2)
    assert world.links == [(0, 2), (1, 2)]
    with pytest.raises(ValueError):
        world.add_link(1, 1)
    world.remove(2)
    world.apply_removals()
    assert world.links == [], f'links of a removed agent survive: {world.links}'
    assert world.check_integrity() == []


def test_copy_is_independent_and_digest_covers_rng():
    world = World(rng=make_rng(7))
    world.spawn('a', 1.0, 2.0, energy=1.0)
    digest = world.state_digest()
    other = world.copy()
    assert other.state_digest() == digest
    other.get(0)['energy'] = 5.0
    other.rng.random()
    assert world.get(0)['energy'] == 1.0
    assert world.state_digest() == digest
    assert other.state_digest() != digest
    assert world.rng.random() == make_rng(7).random(), 'the original PRNG was advanced by the copy'


def test_make_rng_is_reproducible():
    a = make_rng(2**64 - 1).random(5)
    b = make_rng(2**64 - 1).random(5)
    assert np.array_equal(a, b)
    assert not np.array_equal(make_rng(0).random(5), make_rng(1).random(5))


def test_snapshot_round_trip():
    world = World(12.0, 8.0, model='test', tick=4)
    world.spawn('a', 1.0, 2.0, energy=1.5, tag='x')
    world.spawn('b', 3.0, 4.0)
    world.add_link(0, 1)
    snapshot = world.snapshot()
    rebuilt = World.from_snapshot(4, tuple(snapshot['dims']), snapshot['agents'], snapshot['links'], 'test')
    assert rebuilt.snapshot() == snapshot
