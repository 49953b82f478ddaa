"""Reduction rules, the strip-graph bounding loop, and the selection-clique
weighted-independent-set encoding, checked against exhaustive oracles."""

import itertools
import random

import pytest

from igmatch.errors import InputError
from igmatch.graphs import (
    Graph,
    Pattern,
    brute_force_wis,
    complete_graph,
    cycle_graph,
    path_graph,
)
from igmatch.kernel import (
    Distribution,
    WisInstance,
    apply_dis_degree_rule,
    bound_strip_graph,
    build_wis_instance,
    classify_promising,
    derive_strip_structure,
    dis_degree,
    dis_degree_threshold,
    distributions,
    kernelize,
    prune_useless_vertices,
    reduction_step_nonpromising,
    strip_edge_ceiling,
    stripe_profile_weight,
    trivial_no_wis,
    trivial_yes_wis,
    wis_size_ceiling,
)
from igmatch.strips import Strip, StripStructure, classify_strip, validate_strip_structure

from oracles import igm_exhaustive, occurrences_exhaustive
from randgen import random_graph, random_line_graph
from test_color_coding import c11_two_stripes, two_stripe_p4


# ---------------------------------------------------------------------------
# hand fixtures

def spider_line_graph(legs: int, length: int) -> Graph:
    """Line graph of a star of `legs` paths: a K_legs hub plus pendant paths.

    Host ids: hub vertices 0..legs-1, then leg i continues at
    legs + (length-1)*i .. legs + (length-1)*(i+1) - 1.
    """
    edges = [(a, b) for a, b in itertools.combinations(range(legs), 2)]
    for i in range(legs):
        prev = i
        for step in range(length - 1):
            nxt = legs + (length - 1) * i + step
            edges.append((prev, nxt))
            prev = nxt
    return Graph(legs + legs * (length - 1), edges)


def four_gadget_host():
    """Four pendant stripes around one clique, each hiding a shielded triangle.

    Gadget i: stem a_i (host i) in the hub K4, then b,c,d forming a triangle
    behind the stem.  The strip graphs are z-a-b-c-d with the triangle on
    b,c,d, so the region beyond N[z] still holds a K3.
    """
    edges = [(a, b) for a, b in itertools.combinations(range(4), 2)]
    strips = {}
    z_assign = {}
    jg = Graph(5, [(0, 1), (1, 2), (2, 3), (2, 4), (3, 4)])
    for i in range(4):
        b, c, d = 4 + 3 * i, 5 + 3 * i, 6 + 3 * i
        edges += [(i, b), (b, c), (b, d), (c, d)]
        strips[i] = Strip(graph=jg, z=frozenset({0}), g_map={1: i, 2: b, 3: c, 4: d})
        z_assign[i] = {0: 0}
    g = Graph(16, edges)
    ss = StripStructure(
        r_vertices=(0,),
        edges=tuple((i, (0,)) for i in range(4)),
        strips=strips,
        z_assign=z_assign,
    )
    return g, ss


def three_stem_host():
    """Hub triangle of stems with a pendant tip each; tips join no triangle."""
    g = Graph(6, [(0, 1), (0, 2), (1, 2), (0, 3), (1, 4), (2, 5)])
    jg = path_graph(3)
    ss = StripStructure(
        r_vertices=(0,),
        edges=((0, (0,)), (1, (0,)), (2, (0,))),
        strips={
            i: Strip(graph=jg, z=frozenset({0}), g_map={1: i, 2: 3 + i})
            for i in range(3)
        },
        z_assign={i: {0: 0} for i in range(3)},
    )
    return g, ss


def stripes_and_spots_pair():
    """One strip-vertex pair carrying four tiny stripes and three spots.

    Hosts 0..3 and 4..7 are the stripe boundaries (u_i - v_i inside strip i),
    hosts 8..10 the spot bodies; C(r0) = {0..3, 8..10}, C(r1) = {4..7, 8..10}.
    """
    c0 = [0, 1, 2, 3, 8, 9, 10]
    c1 = [4, 5, 6, 7, 8, 9, 10]
    edges = set()
    for clique in (c0, c1):
        edges.update(itertools.combinations(clique, 2))
    for i in range(4):
        edges.add((i, 4 + i))
    p4 = path_graph(4)
    p3 = path_graph(3)
    strips = {}
    z_assign = {}
    eids = []
    for i in range(4):
        strips[i] = Strip(graph=p4, z=frozenset({0, 3}), g_map={1: i, 2: 4 + i})
        z_assign[i] = {0: 0, 1: 3}
        eids.append((i, (0, 1)))
    for j in range(3):
        strips[4 + j] = Strip(graph=p3, z=frozenset({0, 2}), g_map={1: 8 + j})
        z_assign[4 + j] = {0: 0, 1: 2}
        eids.append((4 + j, (0, 1)))
    g = Graph(11, sorted(edges))
    return g, StripStructure((0, 1), tuple(eids), strips, z_assign)


def five_spot_triangle():
    """Strip-graph triangle with parallel spots: two on (0,1), one on (0,2),
    two on (1,2); C(0) = {0,1,2}, C(1) = {0,1,3,4}, C(2) = {2,3,4}."""
    edges = set()
    for clique in ([0, 1, 2], [0, 1, 3, 4], [2, 3, 4]):
        edges.update(itertools.combinations(clique, 2))
    g = Graph(5, sorted(edges))
    p3 = path_graph(3)
    members = [(0, 1), (0, 1), (0, 2), (1, 2), (1, 2)]
    ss = StripStructure(
        r_vertices=(0, 1, 2),
        edges=tuple((i, members[i]) for i in range(5)),
        strips={
            i: Strip(graph=p3, z=frozenset({0, 2}), g_map={1: i}) for i in range(5)
        },
        z_assign={i: {members[i][0]: 0, members[i][1]: 2} for i in range(5)},
    )
    return g, ss


def mixed_spot_stripe():
    """A P5 stripe hanging off a triangle of cliques that share three spots.

    C(r0) = {4, 5, 6}, C(r1) = {5, 7}, C(r2) = {6, 7}; the stripe body is
    the path 0..4 guarded at host 4.
    """
    g = Graph(8, [(0, 1), (1, 2), (2, 3), (3, 4),
                  (4, 5), (4, 6), (5, 6), (5, 7), (6, 7)])
    p3 = path_graph(3)
    j0 = path_graph(6)
    ss = StripStructure(
        r_vertices=(0, 1, 2),
        edges=((0, (0,)), (1, (0, 1)), (2, (0, 2)), (3, (1, 2))),
        strips={
            0: Strip(graph=j0, z=frozenset({5}), g_map={i: i for i in range(5)}),
            1: Strip(graph=p3, z=frozenset({0, 2}), g_map={1: 5}),
            2: Strip(graph=p3, z=frozenset({0, 2}), g_map={1: 6}),
            3: Strip(graph=p3, z=frozenset({0, 2}), g_map={1: 7}),
        },
        z_assign={0: {0: 5}, 1: {0: 0, 1: 2}, 2: {0: 0, 2: 2}, 3: {1: 0, 2: 2}},
    )
    return g, ss


def wheel_plus_path():
    """W5 (claw-free, not a line graph) next to a long path component."""
    edges = [(0, i) for i in range(1, 6)]
    edges += [(1, 2), (2, 3), (3, 4), (4, 5), (5, 1)]
    edges += [(6 + i, 7 + i) for i in range(12)]
    return Graph(19, edges)


def wis_answer(inst: WisInstance) -> bool:
    return brute_force_wis(inst.graph, inst.weights, inst.k_card, inst.k_weight)[0]


# ---------------------------------------------------------------------------
# pattern gate

def test_entry_points_reject_unusable_patterns(p3, k1, k2):
    g, ss = two_stripe_p4()
    with pytest.raises(InputError):
        build_wis_instance(g, ss, p3, 2)
    with pytest.raises(InputError):
        bound_strip_graph(g, p3, 2)
    with pytest.raises(InputError):
        distributions(ss, 0, k1)
    with pytest.raises(InputError):
        stripe_profile_weight(ss.strips[0], 0, None, None, k1)
    with pytest.raises(InputError):
        kernelize(g, p3, 2)


# ---------------------------------------------------------------------------
# pruning

def test_prune_drops_vertices_outside_every_copy(k2, k3):
    g = Graph(4, [(0, 1), (0, 2), (1, 2)])
    pruned = prune_useless_vertices(g, k2)
    assert pruned.n == 3 and len(pruned.edges) == 3

    k3_host = complete_graph(3)
    assert prune_useless_vertices(k3_host, k3) is k3_host


def test_prune_preserves_answers_on_random_hosts(k2, k3):
    rng = random.Random(4821)
    for _ in range(15):
        g = random_graph(rng, rng.randint(4, 9), 0.4)
        for hp in (k2, k3):
            pruned = prune_useless_vertices(g, hp)
            for k in (1, 2):
                assert igm_exhaustive(g, hp.graph, k) == igm_exhaustive(
                    pruned, hp.graph, k
                )


# ---------------------------------------------------------------------------
# the dis-degree rule

def test_dis_degree_threshold_arithmetic():
    assert dis_degree_threshold(3, 2) == 9
    assert dis_degree_threshold(2, 2) == 6
    assert dis_degree_threshold(2, 1) == 2


def test_dis_degree_collapses_parallel_edges():
    ss = derive_strip_structure(complete_graph(7))
    # seven parallel spots but a single distinct neighbour on either side
    assert dis_degree(ss, 0) == 1
    assert dis_degree(ss, 1) == 1
    with pytest.raises(InputError):
        dis_degree(ss, 9)


def test_dis_degree_rule_fires_on_a_nine_spoke_hub(k3):
    g = spider_line_graph(9, 2)
    ss = derive_strip_structure(g)
    hub = next(r for r in ss.r_vertices if dis_degree(ss, r) == 9)
    reduced, k_next = apply_dis_degree_rule(g, ss, k3, 2, hub)
    assert k_next == 1
    assert reduced.n == 9 and not reduced.edges
    assert igm_exhaustive(g, k3.graph, 2) == igm_exhaustive(reduced, k3.graph, 1)


def test_dis_degree_rule_preserves_a_yes_answer(k2):
    g = spider_line_graph(6, 3)
    ss = derive_strip_structure(g)
    hub = next(r for r in ss.r_vertices if dis_degree(ss, r) == 6)
    reduced, k_next = apply_dis_degree_rule(g, ss, k2, 2, hub)
    assert igm_exhaustive(g, k2.graph, 2) is True
    assert igm_exhaustive(reduced, k2.graph, k_next) is True


def test_dis_degree_rule_refuses_below_threshold(k2):
    g, ss = c11_two_stripes()
    with pytest.raises(InputError):
        apply_dis_degree_rule(g, ss, k2, 2, 0)


# ---------------------------------------------------------------------------
# promising strip-edges

def test_spots_are_never_promising(k2, k3):
    ss = derive_strip_structure(complete_graph(7))
    for hp in (k2, k3):
        assert set(classify_promising(ss, hp).values()) == {False}


def test_shielded_triangles_are_promising(k2, k3):
    _, ss = four_gadget_host()
    assert all(classify_promising(ss, k3).values())
    assert all(classify_promising(ss, k2).values())


def test_thin_stripes_are_not_promising(k2):
    # both bodies vanish once N[Z] is removed from the strip graph
    _, ss = two_stripe_p4()
    assert set(classify_promising(ss, k2).values()) == {False}


# ---------------------------------------------------------------------------
# the parallel-strip reduction step

def test_reduction_thins_parallel_spots_to_pattern_order(k2):
    g = complete_graph(7)
    ss = derive_strip_structure(g)
    g2, ss2 = reduction_step_nonpromising(g, ss, 0, 1, k2)
    assert len(ss2.edges) == 2
    assert g2.n == 2
    for k in (1, 2):
        assert igm_exhaustive(g, k2.graph, k) == igm_exhaustive(g2, k2.graph, k)


def test_reduction_prefers_stripes_over_spots(k2):
    g, ss = stripes_and_spots_pair()
    g2, ss2 = reduction_step_nonpromising(g, ss, 1, 0, k2)
    survivors = {eid for eid, _ in ss2.edges}
    assert survivors == {0, 1, 2, 3}
    assert all(classify_strip(ss2.strips[e]) == "stripe" for e in survivors)
    assert g2.n == 8
    for k in (1, 2):
        assert igm_exhaustive(g, k2.graph, k) == igm_exhaustive(g2, k2.graph, k)


def test_reduction_requires_an_overloaded_pair(k2):
    g, ss = c11_two_stripes()
    with pytest.raises(InputError):
        reduction_step_nonpromising(g, ss, 0, 1, k2)
    with pytest.raises(InputError):
        reduction_step_nonpromising(g, ss, 0, 7, k2)


# ---------------------------------------------------------------------------
# the bounding loop

def test_bound_validates_its_arguments(k2):
    g, ss = two_stripe_p4()
    with pytest.raises(InputError):
        bound_strip_graph(g, k2, 2, provider="manual")
    with pytest.raises(InputError):
        bound_strip_graph(g, k2, 2, ss=ss)
    with pytest.raises(InputError):
        bound_strip_graph(g, k2, 2, provider="oracle")
    with pytest.raises(InputError):
        bound_strip_graph(g, k2, -1)
    with pytest.raises(InputError):
        bound_strip_graph(cycle_graph(4), k2, 2, provider="manual", ss=ss)


def test_bound_decides_target_zero(k2):
    br = bound_strip_graph(path_graph(4), k2, 0)
    assert br.status == "decided" and br.answer is True
    assert br.witness is not None and not br.witness.occurrences


def test_bound_decides_when_pruning_empties_the_host(k3):
    br = bound_strip_graph(path_graph(4), k3, 1)
    assert br.status == "decided" and br.answer is False


def test_bound_decides_small_independence_directly(k2):
    br = bound_strip_graph(complete_graph(4), k2, 2)
    assert br.status == "decided" and br.answer is False
    assert any("independence" in n for n in br.notes)


def test_bound_greedy_settles_an_easy_yes(k2):
    br = bound_strip_graph(path_graph(29), k2, 2)
    assert br.status == "decided" and br.answer is True
    assert len(br.witness.occurrences) == 2
    assert any("greedy" in n for n in br.notes)


def test_bound_promising_stock_settles_a_yes(k3):
    g, ss = four_gadget_host()
    br = bound_strip_graph(g, k3, 3, provider="manual", ss=ss)
    assert br.status == "decided" and br.answer is True
    assert len(br.witness.occurrences) == 3
    assert any("promising" in n for n in br.notes)
    assert igm_exhaustive(g, k3.graph, 3) is True


def test_bound_reduces_with_a_certified_ceiling(k2):
    br = bound_strip_graph(path_graph(29), k2, 14)
    assert br.status == "reduced"
    assert br.k == 14
    assert len(br.ss.edges) <= strip_edge_ceiling(2, 14)
    assert any("bounded" in n for n in br.notes)


def test_bound_partial_when_no_structure_exists(k2):
    br = bound_strip_graph(wheel_plus_path(), k2, 7)
    assert br.status == "partial"
    assert br.ss is None
    assert any("not a line graph" in n for n in br.notes)


def test_bound_manual_stops_after_one_mutation(k2):
    edges = [(a, b) for a, b in itertools.combinations(range(7), 2)]
    edges += [(i, 7) for i in range(7)]
    edges += [(7 + i, 8 + i) for i in range(8)]
    g = Graph(16, edges)
    ss = derive_strip_structure(g)
    br = bound_strip_graph(g, k2, 6, provider="manual", ss=ss)
    assert br.status == "partial"
    assert br.ss is not None
    assert len(br.ss.edges) == len(ss.edges) - 5
    assert any("one bounding round" in n for n in br.notes)

    full = bound_strip_graph(g, k2, 6)
    assert full.status == "reduced"
    assert len(full.ss.edges) <= strip_edge_ceiling(2, 6)


def test_bound_manual_stops_when_pruning_bites(k3):
    g, ss = three_stem_host()
    br = bound_strip_graph(g, k3, 2, provider="manual", ss=ss)
    assert br.status == "partial"
    assert br.ss is None
    assert any("pruned" in n for n in br.notes)


# ---------------------------------------------------------------------------
# stripe behaviour weights

def test_profile_weight_fixed_points(k2):
    tight = Strip(graph=path_graph(4), z=frozenset({0, 3}), g_map={1: 0, 2: 1})
    # reserving nothing still bans both N[z]'s, which covers the whole body
    assert stripe_profile_weight(tight, 0, 0, "I", k2) == 0

    loose_z = Strip(graph=Graph(3, [(1, 2)]), z=frozenset({0}), g_map={1: 0, 2: 1})
    # a boundary that does not exist can never be touched
    assert stripe_profile_weight(loose_z, -1, None, None, k2) is None
    assert stripe_profile_weight(loose_z, 0, None, None, k2) == 1


def test_profile_weight_argument_checks(k2):
    s2 = Strip(graph=path_graph(6), z=frozenset({0, 5}), g_map={i: i - 1 for i in range(1, 5)})
    s1 = Strip(graph=path_graph(3), z=frozenset({0}), g_map={1: 0, 2: 1})
    with pytest.raises(InputError):
        stripe_profile_weight(s2, -2, 0, "I", k2)
    with pytest.raises(InputError):
        stripe_profile_weight(s2, 0, 2, "I", k2)
    with pytest.raises(InputError):
        stripe_profile_weight(s2, 0, 0, "X", k2)
    with pytest.raises(InputError):
        stripe_profile_weight(s2, 0, 0, None, k2)
    with pytest.raises(InputError):
        stripe_profile_weight(s1, 0, 0, "I", k2)
    with pytest.raises(InputError):
        stripe_profile_weight(s1, 0, None, "I", k2)


def _profile_weight_oracle(strip, i, j, f, hp):
    """Exhaustive re-derivation: loop over reservations, ban their closed
    neighbourhoods, and take the best compatible family of copies."""
    jg = strip.graph
    zs = sorted(strip.z)
    body = set(strip.interior())
    occ_sets = sorted(
        {frozenset(o) for o in occurrences_exhaustive(jg, hp.graph) if set(o) <= body},
        key=sorted,
    )
    spec = [(zs[0], i)] + ([(zs[1], j)] if len(zs) == 2 else [])
    pools, touch = [], []
    for z, t in spec:
        boundary = sorted(set(jg.neighbors(z)) - strip.z)
        if t == -1:
            if not boundary:
                return None
            touch.append(boundary)
        else:
            pools.append((z, t, boundary))
    if f == "C" and len(pools) == 2 and sum(t for _, t, _ in pools) >= hp.h:
        return None

    def compatible(combo):
        for a, b in itertools.combinations(combo, 2):
            if a & b or any(jg.has_edge(u, v) for u in a for v in b):
                return False
        return True

    best = None
    for picks in itertools.product(*[itertools.combinations(b, t) for _, t, b in pools]):
        sets = [set(p) for p in picks]
        if len(sets) == 2:
            union = sets[0] | sets[1]
            if sets[0] & sets[1]:
                continue
            crossing = any(jg.has_edge(u, v) for u in sets[0] for v in sets[1])
            if f == "I" and crossing:
                continue
            if f == "C" and not all(
                jg.has_edge(u, v) for u, v in itertools.combinations(sorted(union), 2)
            ):
                continue
        banned = set()
        for (z, _, _), pick in zip(pools, picks):
            for v in set(pick) | {z}:
                banned |= jg.closed_neighborhood(v)
        usable = [o for o in occ_sets if o <= body - banned]
        for r in range(len(usable), -1, -1):
            if best is not None and r <= best:
                break
            for combo in itertools.combinations(usable, r):
                if not compatible(combo):
                    continue
                union = set().union(*combo) if combo else set()
                if all(union & set(t) for t in touch):
                    best = r
                    break
    return best


def test_profile_weights_match_the_exhaustive_trace(k2, k3):
    plain = Strip(
        graph=path_graph(6), z=frozenset({0, 5}), g_map={i: i - 1 for i in range(1, 5)}
    )
    # boundaries {1} and {2} are adjacent, so clique-flavour reservations exist
    bridged = Strip(
        graph=Graph(6, [(0, 1), (1, 2), (2, 5), (2, 3), (3, 4)]),
        z=frozenset({0, 5}),
        g_map={i: i - 1 for i in range(1, 5)},
    )
    single = Strip(
        graph=path_graph(7), z=frozenset({0}), g_map={i: i - 1 for i in range(1, 7)}
    )
    for hp in (k2, k3):
        for s in (plain, bridged):
            for i in range(-1, hp.h):
                for j in range(-1, hp.h):
                    for f in ("I", "C"):
                        got = stripe_profile_weight(s, i, j, f, hp)
                        want = _profile_weight_oracle(s, i, j, f, hp)
                        assert got == want, (i, j, f, hp.h)
        for i in range(-1, hp.h):
            got = stripe_profile_weight(single, i, None, None, hp)
            assert got == _profile_weight_oracle(single, i, None, None, hp)


# ---------------------------------------------------------------------------
# demand distributions

def test_distribution_normalization():
    d = Distribution(((2, 1), (0, 2)))
    assert d.counts == ((0, 2), (2, 1))
    assert d.count(0) == 2 and d.count(5) == 0
    assert d.total == 3 and not d.is_idle
    assert Distribution(()).is_idle
    with pytest.raises(InputError):
        Distribution(((1, 0),))


def test_distributions_cap_spots_at_one(k2, k3):
    _, ss = mixed_spot_stripe()
    at_r0 = distributions(ss, 0, k2)
    expected = {
        (),
        ((0, 2),),
        ((0, 1), (1, 1)),
        ((0, 1), (2, 1)),
        ((1, 1), (2, 1)),
    }
    assert {d.counts for d in at_r0} == expected
    # two spots alone cannot supply three vertices
    assert {d.counts for d in distributions(ss, 1, k3)} == {()}
    assert {d.counts for d in distributions(ss, 1, k2)} == {(), ((1, 1), (3, 1))}
    with pytest.raises(InputError):
        distributions(ss, 9, k2)


# ---------------------------------------------------------------------------
# the weighted independent set instance

def test_wis_instance_validation():
    g = Graph(2, [(0, 1)])
    with pytest.raises(InputError):
        WisInstance(g, (1,), 1, 1, ("a", "b"), ((0, 1),))
    with pytest.raises(InputError):
        WisInstance(g, (1, -1), 1, 1, ("a", "b"), ((0, 1),))
    with pytest.raises(InputError):
        WisInstance(g, (1, 1), 1, 1, ("a", "b c"), ((0, 1),))
    assert wis_answer(trivial_yes_wis(3, "why")) is True
    assert wis_answer(trivial_no_wis(3, "why")) is False


def test_build_counts_selection_cliques(k2):
    g, ss = five_spot_triangle()
    inst = build_wis_instance(g, ss, k2, 2)
    assert inst.k_card == 8
    assert inst.k_weight == 2
    assert len(inst.cliques) == 8
    flat = sorted(v for c in inst.cliques for v in c)
    assert flat == list(range(inst.graph.n))
    assert len(set(inst.tags)) == inst.graph.n


def test_build_emits_trivial_yes_on_heavy_strips(k2):
    host = path_graph(8)
    ss = StripStructure(
        r_vertices=(0,),
        edges=((0, (0,)),),
        strips={0: Strip(graph=path_graph(9), z=frozenset({0}),
                         g_map={i: i - 1 for i in range(1, 9)})},
        z_assign={0: {0: 0}},
    )
    inst = build_wis_instance(host, ss, k2, 2)
    assert inst.tags == ("trivial:yes",)
    assert wis_answer(inst) is True
    assert igm_exhaustive(host, k2.graph, 2) is True


def test_build_settles_tiny_targets_directly(k2, k3):
    g, ss = two_stripe_p4()
    assert build_wis_instance(g, ss, k2, 0).tags == ("trivial:yes",)
    assert build_wis_instance(g, ss, k2, 1).tags == ("trivial:yes",)
    assert build_wis_instance(g, ss, k3, 1).tags == ("trivial:no",)


def test_build_rejects_boundaryless_strip_edges(k2):
    ss = StripStructure(
        r_vertices=(),
        edges=((0, ()),),
        strips={0: Strip(graph=complete_graph(2), z=frozenset(), g_map={0: 0, 1: 1})},
        z_assign={0: {}},
    )
    with pytest.raises(InputError):
        build_wis_instance(complete_graph(2), ss, k2, 2)


def test_build_rejects_invalid_structures(k2):
    g, ss = two_stripe_p4()
    with pytest.raises(InputError):
        build_wis_instance(cycle_graph(4), ss, k2, 2)


def test_two_far_claims_on_one_clique_conflict(k2):
    """Two spots meeting at a strip-vertex cannot serve copies confined to
    two different far cliques; both bodies sit inside the shared clique, so
    the copies would touch.  This host used to decode to a bogus yes."""
    g = Graph(6, [(0, 2), (0, 3), (0, 4), (0, 5), (1, 2), (1, 3), (1, 5),
                  (2, 3), (2, 4), (2, 5), (3, 5)])
    ss = derive_strip_structure(g)
    inst = build_wis_instance(g, ss, k2, 2)
    assert igm_exhaustive(g, k2.graph, 2) is False
    assert wis_answer(inst) is False


def test_build_matches_the_matching_oracle_on_hand_fixtures(k2, k3):
    cases = []
    g, ss = two_stripe_p4()
    cases += [(g, ss, k2, k) for k in (2, 3)]
    g, ss = c11_two_stripes()
    cases += [(g, ss, k2, k) for k in (2, 3, 4)]
    cases.append((g, ss, k3, 2))
    g, ss = mixed_spot_stripe()
    cases += [(g, ss, hp, k) for hp in (k2, k3) for k in (2, 3)]
    g, ss = five_spot_triangle()
    cases += [(g, ss, hp, 2) for hp in (k2, k3)]
    for g, ss, hp, k in cases:
        assert validate_strip_structure(g, ss).ok
        inst = build_wis_instance(g, ss, hp, k)
        assert wis_answer(inst) == igm_exhaustive(g, hp.graph, k), (hp.h, k)


def test_build_matches_the_matching_oracle_on_random_line_graphs(k2, k3):
    rng = random.Random(991)
    seen = 0
    while seen < 15:
        g, _ = random_line_graph(rng, max_edges=10)
        if not 0 < g.n <= 12 or any(not g.neighbors(v) for v in range(g.n)):
            continue
        ss = derive_strip_structure(g)
        if ss is None:
            continue
        seen += 1
        for hp in (k2, k3):
            for k in (2, 3):
                inst = build_wis_instance(g, ss, hp, k)
                assert wis_answer(inst) == igm_exhaustive(g, hp.graph, k)


def test_full_cardinality_selections_pick_one_per_clique(k2):
    g, ss = c11_two_stripes()
    inst = build_wis_instance(g, ss, k2, 3)
    ok, chosen = brute_force_wis(inst.graph, inst.weights, inst.k_card, inst.k_weight)
    assert ok
    picked = set(chosen)
    for clique in inst.cliques:
        assert len(picked & set(clique)) == 1


def test_build_respects_the_size_ceiling_and_weight_cap(k2, k3):
    cases = [
        (*c11_two_stripes(), k2, 4),
        (*mixed_spot_stripe(), k3, 2),
        (*five_spot_triangle(), k2, 2),
        (*stripes_and_spots_pair(), k2, 2),
    ]
    for g, ss, hp, k in cases:
        inst = build_wis_instance(g, ss, hp, k)
        assert inst.graph.n > 1, "fixture unexpectedly trivial"
        assert inst.graph.n <= wis_size_ceiling(ss, hp.h)
        assert max(inst.weights) <= k - 1


# ---------------------------------------------------------------------------
# end-to-end kernelization

def test_kernelize_passes_through_decided_answers(k2):
    inst = kernelize(complete_graph(4), k2, 2)
    assert inst.tags == ("trivial:no",)
    assert wis_answer(inst) is False
    assert any("independence" in n for n in inst.notes)

    inst = kernelize(path_graph(29), k2, 2)
    assert inst.tags == ("trivial:yes",)
    assert wis_answer(inst) is True


def test_kernelize_encodes_a_bounded_manual_structure(k2):
    g, ss = c11_two_stripes()
    inst = kernelize(g, k2, 4, provider="manual", ss=ss)
    assert inst.graph.n > 1
    assert wis_answer(inst) is False
    assert igm_exhaustive(g, k2.graph, 4) is False
    assert any("manual structure provider" in n for n in inst.notes)


def test_kernelize_raises_when_no_structure_survives(k2, k3):
    with pytest.raises(InputError):
        kernelize(wheel_plus_path(), k2, 7)
    g, ss = three_stem_host()
    with pytest.raises(InputError):
        kernelize(g, k3, 2, provider="manual", ss=ss)
