import random

from hypothesis import given, settings
from hypothesis import strategies as st

from dynconn.engine import Connectivity
from dynconn.oracle import audit


def visits(c, x):
    """Vertex ids of the visits of x's tour, rotated to start at x's principal visit."""
    tour = c.tours.tour_of_vertex(c.graph.vertices[x])
    seq = []
    for el in tour.elements():
        if not seq or seq[-1][0] is not el.visit:
            seq.append((el.visit, el.vertex.id))
    start = next(i for i, (vis, vid) in enumerate(seq) if vid == x and vis.principal)
    return [vid for _, vid in seq[start:] + seq[:start]]


def cells(c):
    store = c.adj
    return {(i, j): sorted(store.to_rows(i, j)) for i in store.keys() for j in store.neighbours(i)}


def small(n=8, mhat=40, **kw):
    return Connectivity(n, mhat, K=kw.pop("K", 4), h=kw.pop("h", 4), **kw)


def test_cut_path_of_three():
    c = small()
    c.insert(1, 2)
    c.insert(2, 3)
    assert visits(c, 1) == [1, 2, 3, 2]
    c.delete(2, 3)
    assert visits(c, 1) == [1, 2]
    assert visits(c, 3) == [3]
    assert audit(c) == []


def test_cut_two_vertex_tree():
    c = small()
    c.insert(1, 2)
    assert visits(c, 1) == [1, 2]
    c.delete(1, 2)
    assert visits(c, 1) == [1] and visits(c, 2) == [2]
    assert not c.connected(1, 2)


def test_link_singletons_and_path():
    c = small()
    c.insert(1, 2)
    c.insert(2, 3)
    assert visits(c, 1) == [1, 2, 3, 2]
    assert c.tours.list_of(c.graph.vertices[3]) == c.tours.list_of(c.graph.vertices[1])


def random_tree(c, vertices, rng):
    vs = list(vertices)
    rng.shuffle(vs)
    for k in range(1, len(vs)):
        c.insert(vs[k], vs[rng.randrange(k)])


def test_link_random_trees():
    rng = random.Random(1)
    c = Connectivity(60, 400, K=4, h=4)
    random_tree(c, range(20), rng)
    random_tree(c, range(20, 50), rng)
    c.insert(rng.randrange(20), rng.randrange(20, 50))
    assert len(visits(c, 0)) == 2 * 49
    assert audit(c) == []


def test_cut_random_tree():
    rng = random.Random(2)
    for trial in range(5):
        c = Connectivity(50, 200, K=4, h=4)
        random_tree(c, range(50), rng)
        u, v = rng.choice(sorted(c.witness_forest()))
        c.delete(u, v)
        assert audit(c) == []
        sizes = [len(set(visits(c, x))) for x in (u, v)]
        assert sum(sizes) == 50
        for x, k in zip((u, v), sizes):
            assert len(visits(c, x)) == (1 if k == 1 else 2 * (k - 1))


def test_list_ids_follow_components():
    rng = random.Random(3)
    c = Connectivity(40, 300, K=4, h=4)
    for _ in range(1000):
        u, v = rng.sample(range(40), 2)
        if c.graph.lookup_edge(u, v) is None and len(c.graph) < 60:
            c.insert(u, v)
        elif c.graph.lookup_edge(u, v) is not None:
            c.delete(u, v)
    assert audit(c) == []


def test_chunk_split_and_merge_restore_cells():
    rng = random.Random(4)
    c = Connectivity(30, 300, K=3, h=8)
    for _ in range(150):
        u, v = rng.sample(range(30), 2)
        if c.graph.lookup_edge(u, v) is None:
            c.insert(u, v)
    t = c.tours
    before = cells(c)
    for tour in list(t.tours):
        for chunk in list(tour.chunks()):
            if len(chunk.elems) > 1 and len(chunk.sup.chunks) < t.h - 1:
                mid = len(chunk.elems) // 2
                right = t.split_chunk(chunk, mid)
                t.flush()
                t.merge_chunks(chunk, right)
                t.flush()
                assert cells(c) == before
    t.t_chunks.clear()
    t.t_sups.clear()
    assert audit(c) == []


def test_superchunk_split_then_merge_is_identity():
    rng = random.Random(5)
    c = Connectivity(40, 400, K=2, h=8)
    for _ in range(250):
        u, v = rng.sample(range(40), 2)
        if c.graph.lookup_edge(u, v) is None:
            c.insert(u, v)
    t = c.tours
    tour = max(t.tours, key=lambda x: x.nchunks)
    assert tour.long
    before = cells(c)
    sup = tour.sups[0]
    vec_before = t.ls.leaves[sup.key].sup
    new = t.split_superchunk(sup, len(sup.chunks) // 2)
    t.flush()
    assert t.ls.leaves[sup.key].sup | t.ls.leaves[new.key].sup == vec_before | (1 << new.key)
    t.merge_superchunks(sup, new)
    t.flush()
    assert cells(c) == before
    t.t_sups.clear()
    assert audit(c) == []


def test_shrinking_tour_becomes_private():
    c = Connectivity(30, 300, K=1, h=4)
    for x in range(1, 12):
        c.insert(0, x)
    tour = c.tours.tour_of_vertex(c.graph.vertices[0])
    assert tour.long
    for x in range(1, 12):
        c.delete(0, x)
        assert audit(c) == []
    tour = c.tours.tour_of_vertex(c.graph.vertices[0])
    assert not tour.long and len(tour.sups) == 1 and tour.sups[0].key < 0
    assert len(c.lsum.leaves) == 0


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 8), st.data())
def test_plan_cuts_bounds(K, data):
    masses = data.draw(st.lists(st.integers(0, K + 1), min_size=1, max_size=40))
    if sum(masses) <= 3 * K:
        return
    c = Connectivity(2, 10, K=K, h=4)
    cuts = c.tours.plan_cuts(masses)
    bounds = [0] + cuts + [len(masses)]
    pieces = [sum(masses[a:b]) for a, b in zip(bounds, bounds[1:])]
    assert all(K <= p <= 3 * K for p in pieces), pieces
