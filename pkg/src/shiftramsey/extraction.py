"""Majority-pigeonhole extraction of monochromatic structured copies.

Terminology used throughout:

* A *halving step* at root ``r`` and pivot ``p`` looks at the edges
  ``[r,p]-[p,a]`` for the remaining candidates ``a > p``, picks the larger
  color class (ties go to Red) and keeps it.
* A *star extraction* repeats halving steps, always pivoting on the
  smallest surviving candidate, then keeps the pivots whose step color is the
  majority color. For any two kept points ``a < b`` the edge ``[r,a]-[a,b]``
  then has that color ("star scope").
* The nested pipeline chains star extractions, re-rooting each stage at the
  smallest point kept by the previous one, and finishes with a pigeonhole
  over the stage colors. The resulting point set spans an induced interval
  graph whose edges all share one color ("full scope").

The tower function ``S_1 = 2, S_n = 2^(S_{n-1} + 2)`` sizes the host that
guarantees a monochromatic G_k; it is materialized exactly while it fits in
``2^24`` bits and described symbolically beyond that.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

from .coloring import Color, TwoColoring
from .errors import HypothesisViolation, InsufficientHost, TowerOverflow, VerificationFailure
from .shift import ShiftGraph

MAX_TOWER_BITS = 2**24
TRACE_SCHEMA_VERSION = 1


# -- the tower recurrence ----------------------------------------------------


def s_bit_length(n: int) -> int:
    """Bit length of ``S_n``, without materializing ``S_n`` itself."""
    if n < 1:
        raise ValueError("S_n is defined for n >= 1")
    if n == 1:
        return 2
    # S_n = 2^(S_{n-1} + 2) has S_{n-1} + 3 bits
    try:
        return s_sequence(n - 1) + 3
    except TowerOverflow:
        raise TowerOverflow(
            f"bit length of S_{n} is S_{n - 1} + 3, itself a tower of height {n - 1}", n
        ) from None


def s_sequence(n: int) -> int:
    """Exact ``S_n``; raises :class:`TowerOverflow` past ``2^24`` bits (from ``S_5`` on)."""
    if n < 1:
        raise ValueError("S_n is defined for n >= 1")
    if n >= 5:
        # S_5 has S_4 + 3 = 2^262146 + 3 bits
        raise TowerOverflow(f"S_{n} is a tower of height {n}; it has more than 2^24 bits", n)
    value = 2
    for _ in range(n - 1):
        value = 1 << (value + 2)
    assert value.bit_length() <= MAX_TOWER_BITS
    return value


def exact_log2(x: int) -> int | None:
    """``e`` with ``2**e == x``, or ``None`` when ``x`` is not a power of two."""
    if x <= 0 or x & (x - 1):
        return None
    return x.bit_length() - 1


@dataclass(frozen=True)
class TowerSize:
    """``S_index``, exact when it fits the bit-length guard and symbolic otherwise."""

    index: int

    @property
    def height(self) -> int:
        return self.index

    @property
    def value(self) -> int | None:
        try:
            return s_sequence(self.index)
        except TowerOverflow:
            return None

    @property
    def bit_length(self) -> int | None:
        try:
            return s_bit_length(self.index)
        except TowerOverflow:
            return None

    @property
    def exponent(self) -> str:
        """Top exponent in the form ``S_{index-1} + 2``."""
        if self.index == 1:
            return "1"
        return f"S_{self.index - 1} + 2"

    def describe(self) -> str:
        if self.index == 1:
            return "S_1 = 2"
        text = f"S_{self.index} = 2^(S_{self.index - 1} + 2), tower height {self.index}"
        bits = self.bit_length
        if bits is not None and bits <= MAX_TOWER_BITS:
            text += f", bit length {bits}"
        elif self.index >= 2:
            text += f", bit length S_{self.index - 1} + 3"
        return text

    def to_dict(self) -> dict:
        bits = self.bit_length
        value = self.value
        return {
            "index": self.index,
            "height": self.height,
            "exponent": self.exponent,
            "bit_length": bits if bits is not None and bits <= MAX_TOWER_BITS else None,
            "exact": value is not None,
            "description": self.describe(),
        }


def required_host_size(k: int) -> TowerSize:
    """Level ``N = S_{2^(k+1)}`` of a host G_N that forces a monochromatic G_k."""
    if k < 1:
        raise ValueError("required_host_size needs k >= 1")
    return TowerSize(2 ** (k + 1))


def ramsey_schedule(k: int) -> list[TowerSize]:
    """Per-stage star-extraction levels ``t_j = S_{M-j+1} + 1`` (returned as ``S_{M-j+1}``), ``M = 2^(k+1) - 1``."""
    stages = 2 ** (k + 1) - 1
    return [TowerSize(stages - j) for j in range(stages)]


# -- traces ------------------------------------------------------------------


@dataclass(frozen=True)
class StageRecord:
    """One recorded step of an extraction.

    With ``pivot`` set this is a halving step: every edge
    ``[root,pivot]-[pivot,a]`` for ``a`` in ``surviving_points`` has
    ``stage_color``. Without a pivot it is a pipeline stage: the star
    ``[root,a]-[a,b]`` over ``surviving_points`` has ``stage_color``, and
    ``steps`` holds the halving steps that produced it.
    """

    root_point: int
    surviving_points: tuple[int, ...]
    stage_color: Color
    pivot: int | None = None
    steps: tuple[StageRecord, ...] = ()

    def __post_init__(self):
        pts = self.surviving_points
        if not pts:
            raise ValueError("surviving point set must be nonempty")
        if any(a >= b for a, b in zip(pts, pts[1:])):
            raise ValueError("surviving points must be strictly increasing")
        low = self.pivot if self.pivot is not None else self.root_point
        if not self.root_point <= low < pts[0] or (self.pivot is not None and self.pivot == self.root_point):
            raise ValueError("root and pivot must precede the surviving points")

    def to_dict(self) -> dict:
        d = {"root_point": self.root_point}
        if self.pivot is not None:
            d["pivot"] = self.pivot
        d["surviving_points"] = list(self.surviving_points)
        d["stage_color"] = str(self.stage_color)
        if self.steps:
            d["steps"] = [s.to_dict() for s in self.steps]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> StageRecord:
        return cls(
            root_point=int(d["root_point"]),
            surviving_points=tuple(int(p) for p in d["surviving_points"]),
            stage_color=Color.from_token(d["stage_color"]),
            pivot=int(d["pivot"]) if "pivot" in d else None,
            steps=tuple(cls.from_dict(s) for s in d.get("steps", ())),
        )


@dataclass(frozen=True)
class ExtractionTrace:
    procedure: str  # "lemma1" | "ramsey" | "opportunistic"
    host_points: int
    stages: tuple[StageRecord, ...]
    final_points: tuple[int, ...]
    final_color: Color
    achieved_level: int

    def __post_init__(self):
        if len(self.final_points) < 2:
            raise ValueError("a trace certifies at least two points")

    @property
    def scope(self) -> str:
        return "star" if self.procedure == "lemma1" else "full"

    def to_dict(self) -> dict:
        return {
            "schema_version": TRACE_SCHEMA_VERSION,
            "procedure": self.procedure,
            "host_points": self.host_points,
            "scope": self.scope,
            "stages": [s.to_dict() for s in self.stages],
            "final_points": list(self.final_points),
            "final_color": str(self.final_color),
            "achieved_level": self.achieved_level,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> ExtractionTrace:
        if d.get("schema_version") != TRACE_SCHEMA_VERSION:
            raise ValueError(f"unsupported trace schema version {d.get('schema_version')!r}")
        return cls(
            procedure=d["procedure"],
            host_points=int(d["host_points"]),
            stages=tuple(StageRecord.from_dict(s) for s in d["stages"]),
            final_points=tuple(int(p) for p in d["final_points"]),
            final_color=Color.from_token(d["final_color"]),
            achieved_level=int(d["achieved_level"]),
        )

    @classmethod
    def from_json(cls, text: str) -> ExtractionTrace:
        return cls.from_dict(json.loads(text))


# -- extraction core ---------------------------------------------------------


def _majority(red: int, blue: int) -> Color:
    return Color.RED if red >= blue else Color.BLUE


def _star_extract(
    c: TwoColoring,
    root: int,
    candidates: Sequence[int],
    final_keep: int | None = None,
) -> tuple[list[StageRecord], list[int], Color]:
    """Halving steps from ``root`` followed by the pigeonhole over pivot colors.

    With ``final_keep`` set (exact-size mode) each step keeps
    only the ``ceil(rest/2)`` smallest majority candidates and the final
    selection keeps the ``final_keep`` smallest majority pivots. Without it
    the whole majority class survives each step, and the last lone candidate
    (which constrains nothing) joins the selection.
    """
    steps: list[StageRecord] = []
    cand = list(candidates)
    while len(cand) >= 2:
        pivot, rest = cand[0], cand[1:]
        red, blue = [], []
        for a in rest:
            (red if c.star_color(root, pivot, a) is Color.RED else blue).append(a)
        color = _majority(len(red), len(blue))
        kept = red if color is Color.RED else blue
        bound = (len(rest) + 1) // 2
        if len(kept) < bound:
            raise VerificationFailure(f"majority class of size {len(kept)} below ceil({len(rest)}/2)")
        if final_keep is not None:
            kept = kept[:bound]
        steps.append(StageRecord(root, tuple(kept), color, pivot=pivot))
        cand = kept
    if not steps:
        raise ValueError("star extraction needs at least two candidates")

    n_red = sum(s.stage_color is Color.RED for s in steps)
    color = _majority(n_red, len(steps) - n_red)
    members = [s.pivot for s in steps if s.stage_color is color]
    if final_keep is not None:
        if len(members) < final_keep:
            raise VerificationFailure(f"only {len(members)} pivots of the majority color, need {final_keep}")
        members = members[:final_keep]
    else:
        members += cand
    return steps, members, color


def _check_star(c: TwoColoring, root: int, points: Sequence[int], color: Color) -> None:
    for x, a in enumerate(points):
        for b in points[x + 1 :]:
            if c.star_color(root, a, b) is not color:
                raise VerificationFailure(f"edge [{root},{a}]-[{a},{b}] is not {color}")


def _check_step(c: TwoColoring, step: StageRecord) -> None:
    for a in step.surviving_points:
        if c.star_color(step.root_point, step.pivot, a) is not step.stage_color:
            raise VerificationFailure(f"edge [{step.root_point},{step.pivot}]-[{step.pivot},{a}] is not {step.stage_color}")


def _check_full(c: TwoColoring, points: Sequence[int], color: Color) -> None:
    for x, a in enumerate(points):
        _check_star(c, a, points[x + 1 :], color)


def _interval_host(c: TwoColoring) -> ShiftGraph:
    host = c.host
    if not isinstance(host, ShiftGraph) or host.arity != 2:
        raise HypothesisViolation("extraction runs on interval (arity 2) shift graphs")
    return host


def _level_from_size(size: int) -> int:
    """Largest ``j`` with ``size >= 2^j + 1``."""
    return (size - 1).bit_length() - 1


def lemma1_extract(c: TwoColoring, t: int) -> ExtractionTrace:
    """Star-monochromatic copy of G_t rooted at point 1 inside G_n, ``n = 2^(t+1)``.

    Runs ``n`` halving steps from root 1 (pivots 2, then the smallest
    survivor of each step), then keeps the ``2^t`` smallest pivots of the
    majority step color. Every size is checked against the guaranteed bound
    as the procedure goes.
    """
    if t < 1:
        raise HypothesisViolation("t must be a positive integer")
    host = _interval_host(c)
    n = 2 ** (t + 1)
    if host.level != n:
        raise HypothesisViolation(f"lemma1_extract with t={t} needs host G_{n}, got {host}")

    steps, members, color = _star_extract(c, 1, range(2, host.point_count + 1), final_keep=2**t)
    if len(steps) != n:
        raise VerificationFailure(f"expected {n} halving steps, ran {len(steps)}")
    for m, step in enumerate(steps, 1):
        if len(step.surviving_points) != 2 ** (n - m):
            raise VerificationFailure(f"step {m} kept {len(step.surviving_points)} points, expected 2^{n - m}")
    final = (1, *members)
    for step in steps:
        _check_step(c, step)
    _check_star(c, 1, members, color)
    return ExtractionTrace("lemma1", host.point_count, tuple(steps), final, color, t)


def _select_roots(stages: Sequence[StageRecord], keep: int | None) -> tuple[list[int], Color, int]:
    n_red = sum(s.stage_color is Color.RED for s in stages)
    color = _majority(n_red, len(stages) - n_red)
    chosen = [x for x, s in enumerate(stages) if s.stage_color is color]
    if keep is not None:
        if len(chosen) < keep:
            raise VerificationFailure(f"only {len(chosen)} stages of the majority color, need {keep}")
        chosen = chosen[:keep]
    return chosen, color, n_red


def _nested_pipeline(c: TwoColoring, stage_levels: Sequence[int], keep: int) -> ExtractionTrace:
    """Nested star-extraction stages at exactly the levels in ``stage_levels``.

    Stage ``j`` runs an exact-size star extraction with ``t = stage_levels[j]`` to the root
    ``min(S_{j-1})`` and the next ``2^(2^(t+1))`` points of ``S_{j-1}``.
    The final point set is the roots of the first ``keep`` majority-color
    stages plus the smallest point kept by the last of them.
    """
    host = _interval_host(c)
    stages: list[StageRecord] = []
    prev = list(host.points)
    for t in stage_levels:
        need = 2 ** (2 ** (t + 1))
        root, pool = prev[0], prev[1 : 1 + need]
        if len(pool) < need:
            raise InsufficientHost(f"stage needs {need} points after root {root}, host has {len(pool)}")
        steps, members, color = _star_extract(c, root, pool, final_keep=2**t)
        _check_star(c, root, members, color)
        stages.append(StageRecord(root, tuple(members), color, steps=tuple(steps)))
        prev = members
    chosen, color, _ = _select_roots(stages, keep)
    final = tuple(stages[x].root_point for x in chosen) + (stages[chosen[-1]].surviving_points[0],)
    _check_full(c, final, color)
    return ExtractionTrace("ramsey", host.point_count, tuple(stages), final, color, _level_from_size(len(final)))


def ramsey_extract(c: TwoColoring, k: int) -> ExtractionTrace:
    """Fully monochromatic copy of G_k inside a host of level ``S_{2^(k+1)}``.

    The required host is a tower-sized object, so in practice this raises
    :class:`InsufficientHost`; :func:`opportunistic_extract` runs the same
    nested procedure on the point sets actually available.
    """
    if k < 1:
        raise HypothesisViolation("k must be a positive integer")
    host = _interval_host(c)
    need = required_host_size(k)
    level = host.level
    value = need.value
    if value is None or level is None or level < value:
        raise InsufficientHost(
            f"G_{k} is only guaranteed inside G_N with N = {need.describe()}; host is {host}. "
            "Use opportunistic_extract for desk-scale hosts."
        )
    # unreachable for materializable hosts, kept as the reference schedule
    levels = [size.value + 1 for size in ramsey_schedule(k)]
    return _nested_pipeline(c, levels, keep=2**k)


def opportunistic_extract(c: TwoColoring, n: int) -> ExtractionTrace:
    """Nested extraction on G_n using whatever point sets actually survive.

    Stages continue while the previous stage kept at least three points
    (a root and two candidates). The final set is the roots of every
    majority-color stage plus the last stage's remaining points (at most
    two), which is always at least two points.
    """
    host = _interval_host(c)
    if n < 1 or host.level != n:
        raise HypothesisViolation(f"opportunistic_extract(n={n}) needs host G_{n}, got {host}")
    stages: list[StageRecord] = []
    prev = list(host.points)
    while len(prev) >= 3:
        root = prev[0]
        steps, members, color = _star_extract(c, root, prev[1:])
        stages.append(StageRecord(root, tuple(members), color, steps=tuple(steps)))
        prev = members
    if stages:
        chosen, color, _ = _select_roots(stages, None)
    else:
        chosen, color = [], Color.RED
    final = tuple(stages[x].root_point for x in chosen) + tuple(prev)
    for stage in stages:
        _check_star(c, stage.root_point, stage.surviving_points, stage.stage_color)
    _check_full(c, final, color)
    return ExtractionTrace(
        "opportunistic", host.point_count, tuple(stages), final, color, _level_from_size(len(final))
    )
