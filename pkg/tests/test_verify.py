import dataclasses
from itertools import combinations, permutations, product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shiftramsey.coloring import Color, TwoColoring, monochromatic_coloring, random_coloring
from shiftramsey.errors import SizeGuardError
from shiftramsey.extraction import lemma1_extract, opportunistic_extract
from shiftramsey.graph import Graph, complete_graph, cycle_graph, path_graph
from shiftramsey.shift import eh_graph, shift_graph
from shiftramsey.verify import (
    Sampled,
    classical_ramsey,
    contains_mono_copy,
    ramsey_check,
    verify_structured_copy,
    verify_trace,
)


def brute_has_mono(n, edges, bits, pattern):
    """Try every injective placement of the pattern into each color class."""
    pedges = pattern.edge_list
    for color in (0, 1):
        cls = {frozenset(e) for e, b in zip(edges, bits) if b == color}
        for image in permutations(range(n), pattern.vertex_count):
            if all(frozenset((image[u], image[v])) in cls for u, v in pedges):
                return True
    return False


def brute_forced(host_graph, pattern):
    edges = host_graph.edge_list
    for bits in product((0, 1), repeat=len(edges)):
        if not brute_has_mono(host_graph.vertex_count, edges, bits, pattern):
            return False
    return True


# -- structured copies ---------------------------------------------------------


def test_structured_copy_mono():
    c = monochromatic_coloring(eh_graph(3), Color.BLUE)
    assert verify_structured_copy(c, range(1, 10), Color.BLUE)
    assert not verify_structured_copy(c, range(1, 10), Color.RED)
    assert verify_structured_copy(c, [1, 4, 9], Color.BLUE, scope="star")


def test_structured_copy_single_bad_edge():
    host = eh_graph(2)
    base = monochromatic_coloring(host, Color.RED)
    data = bytearray(base.data)
    data[host.edge_rank((1, 3), (3, 5))] = 1
    c = TwoColoring(host, bytes(data))
    assert not verify_structured_copy(c, [1, 3, 5], Color.RED)
    assert not verify_structured_copy(c, [1, 3, 5], Color.RED, "star")
    assert verify_structured_copy(c, [1, 2, 4, 5], Color.RED)
    # edges rooted at 3 are outside the star of 1
    data[host.edge_rank((2, 3), (3, 4))] = 1
    c = TwoColoring(host, bytes(data))
    assert verify_structured_copy(c, [1, 2, 4], Color.RED, "star")


def test_structured_copy_errors():
    c = monochromatic_coloring(eh_graph(2), Color.RED)
    with pytest.raises(ValueError):
        verify_structured_copy(c, [1], Color.RED)
    with pytest.raises(ValueError):
        verify_structured_copy(c, [1, 1, 2], Color.RED)
    with pytest.raises(ValueError):
        verify_structured_copy(c, [1, 6], Color.RED)
    with pytest.raises(ValueError):
        verify_structured_copy(c, [1, 2], Color.RED, scope="half")
    with pytest.raises(ValueError):
        verify_structured_copy(monochromatic_coloring(complete_graph(3), Color.RED), [0, 1], Color.RED)


def test_verify_trace_accepts_extractions():
    c = random_coloring(eh_graph(4), 21)
    assert verify_trace(c, lemma1_extract(c, 1))
    assert verify_trace(c, opportunistic_extract(c, 4))


@pytest.mark.parametrize("seed", range(10))
def test_verify_trace_detects_tampering(seed):
    c = random_coloring(eh_graph(4), seed)
    tr = lemma1_extract(c, 1)
    flipped = Color(1 - tr.final_color)
    assert not verify_trace(c, dataclasses.replace(tr, final_color=flipped))
    other = random_coloring(eh_graph(4), seed + 1000)
    # a trace is tied to its coloring; any recorded step that disagrees fails
    if any(other.star_color(s.root_point, s.pivot, a) is not s.stage_color for s in tr.stages for a in s.surviving_points):
        assert not verify_trace(other, tr)
    assert not verify_trace(random_coloring(eh_graph(3), seed), tr)


def test_verify_trace_rejects_short_final_set():
    c = monochromatic_coloring(eh_graph(4), Color.RED)
    tr = lemma1_extract(c, 1)
    assert not verify_trace(c, dataclasses.replace(tr, final_points=(1, 2)))
    assert not verify_trace(c, dataclasses.replace(tr, final_points=(1, 3, 2)))


# -- monochromatic copies -----------------------------------------------------


def test_contains_mono_copy_pentagon(k5_pentagon):
    assert contains_mono_copy(k5_pentagon, complete_graph(3)) is None
    color, m = contains_mono_copy(k5_pentagon, path_graph(3))
    assert color is Color.RED
    assert m.is_valid(path_graph(3), k5_pentagon.host)


def test_contains_mono_copy_all_blue():
    c = monochromatic_coloring(eh_graph(2), Color.BLUE)
    color, m = contains_mono_copy(c, eh_graph(1).to_graph())
    assert color is Color.BLUE


def test_contains_mono_copy_guard():
    c = monochromatic_coloring(eh_graph(3), Color.RED)
    with pytest.raises(SizeGuardError):
        contains_mono_copy(c, path_graph(13))


@settings(max_examples=30)
@given(st.integers(0, 2**64 - 1), st.sampled_from([path_graph(3), path_graph(4), complete_graph(3), cycle_graph(4)]))
def test_contains_mono_copy_matches_brute(seed, pattern):
    c = random_coloring(complete_graph(5), seed)
    g = c.host
    found = contains_mono_copy(c, pattern)
    assert (found is not None) == brute_has_mono(5, g.edge_list, c.data, pattern)
    if found is not None:
        color, m = found
        for u, v in pattern.edge_list:
            assert c.color(m[u], m[v]) is color


# -- forcing ------------------------------------------------------------------


def test_ramsey_g2_forces_g1():
    v = ramsey_check(eh_graph(2), eh_graph(1).to_graph())
    assert v.forced and v.colorings_checked == 1024 and v.witness_coloring is None


def test_ramsey_g2_vs_sh42():
    pattern = shift_graph(4, 2).to_graph()
    v = ramsey_check(eh_graph(2), pattern)
    assert not v.forced
    assert v.witness_rank == 78 and v.colorings_checked == 79
    assert contains_mono_copy(v.witness_coloring, pattern) is None
    g = eh_graph(2).to_graph()
    assert not brute_has_mono(g.vertex_count, g.edge_list, v.witness_coloring.data, pattern)
    d = v.to_dict()
    assert d["witness"]["colors"] == "RBBBRRBRRR"


def test_ramsey_witness_is_minimal():
    pattern = shift_graph(4, 2).to_graph()
    g = eh_graph(2).to_graph()
    for rank in range(78):
        bits = [rank >> e & 1 for e in range(10)]
        assert brute_has_mono(g.vertex_count, g.edge_list, bits, pattern)


def test_ramsey_pattern_larger_than_host():
    v = ramsey_check(eh_graph(1), eh_graph(2).to_graph())
    assert not v.forced and v.witness_rank == 0 and v.colorings_checked == 1


@pytest.mark.parametrize(
    "pattern", [path_graph(2), path_graph(3), path_graph(4), complete_graph(3), Graph.from_edges(4, [(0, 1), (2, 3)])]
)
@pytest.mark.parametrize("points", [3, 4, 5])
def test_ramsey_matches_brute_force(pattern, points):
    host = shift_graph(points, 2)
    if host.edge_count > 10:
        pytest.skip("brute force limited to small hosts")
    assert ramsey_check(host, pattern).forced == brute_forced(host.to_graph(), pattern)


@pytest.mark.parametrize("pattern", [path_graph(3), path_graph(4), complete_graph(3)])
def test_ramsey_monotone_in_host(pattern):
    verdicts = [ramsey_check(shift_graph(n, 2), pattern).forced for n in (3, 4, 5)]
    # forcing in a host is inherited by every host containing it
    for small, big in zip(verdicts, verdicts[1:]):
        assert big or not small


def test_ramsey_parallel_matches_serial():
    pattern = shift_graph(4, 2).to_graph()
    serial = ramsey_check(eh_graph(2), pattern)
    par = ramsey_check(eh_graph(2), pattern, jobs=2)
    assert par.to_json() == serial.to_json()
    assert ramsey_check(eh_graph(2), eh_graph(1).to_graph(), jobs=2).forced


def test_ramsey_sampled():
    v = ramsey_check(eh_graph(3), eh_graph(1).to_graph(), Sampled(50, seed=3))
    assert v.forced and v.mode == "sampled" and v.colorings_checked == 50
    w = ramsey_check(eh_graph(2), shift_graph(4, 2).to_graph(), Sampled(500, seed=0))
    assert not w.forced and w.mode == "sampled"
    assert contains_mono_copy(w.witness_coloring, shift_graph(4, 2).to_graph()) is None
    assert w.to_dict()["witness"]["seed"] == w.witness_coloring.seed


def test_ramsey_guards():
    with pytest.raises(SizeGuardError):
        ramsey_check(eh_graph(3), path_graph(3))
    with pytest.raises(SizeGuardError):
        ramsey_check(eh_graph(2), path_graph(13))
    with pytest.raises(ValueError):
        ramsey_check(eh_graph(2), path_graph(3), mode="lucky")


# -- classical Ramsey ---------------------------------------------------------


@pytest.mark.parametrize("n, forced", [(3, False), (4, False), (5, False), (6, True)])
def test_classical_r33(n, forced):
    v = classical_ramsey(3, 3, n)
    assert v.forced is forced
    if forced:
        assert v.colorings_checked == 2 ** (n * (n - 1) // 2)
    else:
        assert contains_mono_copy(v.witness_coloring, complete_graph(3)) is None


def test_classical_r33_witness_at_five_is_a_pentagon():
    v = classical_ramsey(3, 3, 5)
    red = [e for e, b in zip(complete_graph(5).edge_list, v.witness_coloring.data) if b == 0]
    g = Graph.from_edges(5, red)
    assert all(g.degree(x) == 2 for x in range(5))


def test_classical_r33_at_seven():
    assert classical_ramsey(3, 3, 7, chunk=1 << 18).forced


@pytest.mark.parametrize("s, t, n", [(2, 2, 2), (2, 3, 3), (2, 3, 2), (3, 2, 3), (2, 4, 4), (2, 4, 3), (3, 3, 4)])
def test_classical_matches_brute(s, t, n):
    edges = list(combinations(range(n), 2))
    expected = True
    for bits in product((0, 1), repeat=len(edges)):
        red = {e for e, b in zip(edges, bits) if b == 0}
        has_red = any(all(p in red for p in combinations(q, 2)) for q in combinations(range(n), s))
        has_blue = any(all(p not in red for p in combinations(q, 2)) for q in combinations(range(n), t))
        if not (has_red or has_blue):
            expected = False
            break
    assert classical_ramsey(s, t, n).forced is expected


def test_classical_guards():
    with pytest.raises(SizeGuardError):
        classical_ramsey(3, 3, 8)
    with pytest.raises(ValueError):
        classical_ramsey(0, 3, 4)
