"""Acceptance suite: one PASS/FAIL line per criterion, with its time budget."""

import hashlib
import subprocess
import sys
import time
from contextlib import contextmanager
from math import comb

import pytest

from shiftramsey.coloring import (
    ADVERSARIAL_PREDICATES,
    Color,
    adversarial_coloring,
    monochromatic_coloring,
    random_coloring,
)
from shiftramsey.extraction import exact_log2, lemma1_extract, opportunistic_extract, s_sequence
from shiftramsey.graph import chromatic_number, clique_number, complete_graph, find_monomorphism, is_triangle_free
from shiftramsey.shift import canonical_embedding, eh_graph, induced_on_points, shift_graph
from shiftramsey.verify import (
    classical_ramsey,
    contains_mono_copy,
    ramsey_check,
    verify_structured_copy,
    verify_trace,
)

pytestmark = pytest.mark.acceptance


@pytest.fixture
def criterion(capsys):
    @contextmanager
    def run(number, title, budget_s):
        start = time.perf_counter()
        try:
            yield
        except BaseException as exc:
            elapsed = time.perf_counter() - start
            with capsys.disabled():
                print(f"\nFAIL criterion {number}: {title} ({elapsed:.2f}s; {type(exc).__name__}: {exc})")
            raise
        elapsed = time.perf_counter() - start
        ok = elapsed < budget_s
        with capsys.disabled():
            status = "PASS" if ok else "FAIL"
            print(f"\n{status} criterion {number}: {title} ({elapsed:.2f}s, budget {budget_s:g}s)")
        assert ok, f"criterion {number} took {elapsed:.1f}s, budget {budget_s}s"

    return run


def test_1_invariants(criterion):
    with criterion(1, "G_k triangle-free, omega = 2, exact counts for k = 1..5", 30):
        for k in range(1, 6):
            host = eh_graph(k)
            g = host.to_graph()
            p = 2**k + 1
            assert g.vertex_count == comb(p, 2)
            assert g.edge_count == comb(p, 3)
            assert is_triangle_free(g)
            assert clique_number(g) == 2


def test_2_chromatic_number(criterion):
    with criterion(2, "chi(G_k) = k + 1 for k = 1..3, exact", 300):
        for k in (1, 2, 3):
            assert chromatic_number(eh_graph(k).to_graph()) == k + 1


def test_3_lemma1(criterion):
    with criterion(3, "lemma1_extract size and star-scope soundness at t = 1 and t = 2", 120):
        host = eh_graph(4)
        colorings = [random_coloring(host, s) for s in range(1000)]
        colorings += [monochromatic_coloring(host, Color.RED), monochromatic_coloring(host, Color.BLUE)]
        colorings += [adversarial_coloring(host, name) for name in sorted(ADVERSARIAL_PREDICATES)]
        assert len(ADVERSARIAL_PREDICATES) >= 3
        for c in colorings:
            tr = lemma1_extract(c, 1)
            assert len(tr.final_points) == 3 and 1 in tr.final_points
            assert verify_structured_copy(c, tr.final_points, tr.final_color, "star")
            assert verify_trace(c, tr)
        big = eh_graph(8)
        for s in range(10):
            c = random_coloring(big, s)
            assert not c.is_dense
            tr = lemma1_extract(c, 2)
            assert len(tr.final_points) == 5 and 1 in tr.final_points
            assert verify_structured_copy(c, tr.final_points, tr.final_color, "star")


def test_4_pipeline(criterion):
    with criterion(4, "nested extraction on G_5 verified at full scope; all-Red G_3 gives level 3", 60):
        host = eh_graph(5)
        for s in range(100):
            c = random_coloring(host, s)
            tr = opportunistic_extract(c, 5)
            assert verify_structured_copy(c, tr.final_points, tr.final_color, "full")
            assert verify_trace(c, tr)
        tr = opportunistic_extract(monochromatic_coloring(eh_graph(3), Color.RED), 3)
        assert tr.achieved_level == 3
        assert tr.final_points == tuple(range(1, 10))


def test_5_recurrence(criterion):
    with criterion(5, "S_1..S_3 exact, S_4 bit length, log identity for n = 2..4", 1):
        assert (s_sequence(1), s_sequence(2), s_sequence(3)) == (2, 16, 262144)
        assert s_sequence(4).bit_length() == 262147
        for n in (2, 3, 4):
            s = s_sequence(n)
            assert s % 4 == 0 and exact_log2(s // 4) == s_sequence(n - 1)


def test_6_ascending(criterion):
    with criterion(6, "G_k sits in G_(k+1) on its first points; G_k equals Sh(2^k+1, 2)", 60):
        for k in (1, 2, 3):
            small, big = eh_graph(k), eh_graph(k + 1)
            sub, emb = induced_on_points(big, range(1, 2**k + 2))
            assert sub == small
            assert emb == canonical_embedding(k, k + 1)
            mapped = {frozenset(map(emb.map_vertex, e)) for e in small.edges()}
            want = {
                frozenset(e)
                for e in big.edges()
                if all(v[1] <= 2**k + 1 for v in e)
            }
            assert mapped == want
            assert [emb.map_vertex(v) for v in small.vertices()] == [v for v in big.vertices() if v[1] <= 2**k + 1]
            assert small.to_graph() == shift_graph(2**k + 1, 2).to_graph()
            assert list(small.edges()) == list(shift_graph(2**k + 1, 2).edges())


def test_7_classical(criterion):
    with criterion(7, "R(3,3): K_6 forced over 32768 colorings, K_5 witness validated", 10):
        v6 = classical_ramsey(3, 3, 6)
        assert v6.forced and v6.colorings_checked == 32768
        v5 = classical_ramsey(3, 3, 5)
        assert not v5.forced
        assert contains_mono_copy(v5.witness_coloring, complete_graph(3)) is None


def test_8_micro_ramsey(criterion, capsys):
    with criterion(8, "G_2 forces G_1 over 1024 colorings; G_2 vs Sh(4,2) verdict recorded", 10):
        v = ramsey_check(eh_graph(2), eh_graph(1).to_graph())
        assert v.forced and v.colorings_checked == 1024
        pattern = shift_graph(4, 2).to_graph()
        w = ramsey_check(eh_graph(2), pattern)
        if not w.forced:
            assert contains_mono_copy(w.witness_coloring, pattern) is None
        with capsys.disabled():
            print(f"\n  G_2 -> Sh(4,2): {w.to_json().strip()}".replace("\n", " "))


def _run(*argv):
    proc = subprocess.run([sys.executable, "-m", "shiftramsey.cli", *argv], capture_output=True, check=True)
    return hashlib.sha256(proc.stdout).hexdigest()


def test_9_determinism(criterion):
    with criterion(9, "extractions and verdicts hash identically across two runs", 120):
        jobs = [
            ("extract", "--lemma1", "--t", "1", "--seed", "7"),
            ("extract", "--lemma1", "--t", "2", "--seed", "7"),
            ("extract", "--opportunistic", "--level", "5", "--seed", "7"),
            ("extract", "--opportunistic", "--level", "4", "--adversarial", "parity_sum"),
            ("ramsey", "--host", "eh:2", "--pattern", "eh:1"),
            ("ramsey", "--host", "eh:2", "--pattern", "sh:4,2", "--jobs", "2"),
            ("ramsey", "--classical", "3,3,5"),
            ("ramsey", "--host", "eh:3", "--pattern", "sh:4,2", "--mode", "sampled", "--count", "50", "--seed", "1"),
        ]
        first = [_run(*a) for a in jobs]
        second = [_run(*a) for a in jobs]
        assert first == second
        # in-process outputs agree with each other as well
        c = random_coloring(eh_graph(5), 42)
        assert opportunistic_extract(c, 5).to_json() == opportunistic_extract(random_coloring(eh_graph(5), 42), 5).to_json()
