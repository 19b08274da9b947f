"""Replayable reduction trace.

Every structural or cost reduction appends one step.  Replaying the steps in
reverse maps a feasible solution of the reduced instance back to a feasible
solution of the instance before the step, never increasing cost or weight.
Solutions are carried as multisets of link ids of the current instance.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .graph import INF, Cost


class TraceError(ValueError):
    """Solution/trace mismatch during replay."""


@dataclass(frozen=True)
class Contracted:
    """Node classes merged; one cheapest link kept per (pair, weight) bundle."""

    node_map: tuple[int, ...]  # old node id -> new node id
    survivors: tuple[tuple[int, int], ...]  # (new link id, old link id)

    def lift(self, chosen: Counter) -> Counter:
        back = dict(self.survivors)
        out: Counter = Counter()
        for lid, mult in chosen.items():
            if lid not in back:
                raise TraceError(f"link {lid} unknown to contraction step")
            out[back[lid]] += mult
        return out


@dataclass(frozen=True)
class TriangleFix:
    """Cost of link `target` lowered to cost(left) + cost(right)."""

    target: int
    left: int
    right: int

    def lift(self, chosen: Counter) -> Counter:
        if chosen.get(self.target, 0) == 0:
            return chosen
        out = Counter(chosen)
        mult = out.pop(self.target)
        out[self.left] += mult
        out[self.right] += mult
        return out


@dataclass(frozen=True)
class ShadowFix:
    """Cost of link `target` lowered to the cost of `source`, of which it is a
    shadow.  `alternative` is the fallback link for the foliate exchange in the
    disconnected (0 -> 2) setting; lifting there must test both candidates."""

    target: int
    source: int
    alternative: Optional[int] = None

    def lift(self, chosen: Counter) -> Counter:
        if chosen.get(self.target, 0) == 0:
            return chosen
        out = Counter(chosen)
        mult = out.pop(self.target)
        out[self.source] += mult
        return out


@dataclass(frozen=True)
class PathContracted:
    """Degree-2 paths (or 2-circuit chains) collapsed; nodes renumbered."""

    node_map: tuple[Optional[int], ...]  # old node id -> new id, None if dropped
    link_map: tuple[tuple[int, int], ...]  # (new link id, old link id)

    def lift(self, chosen: Counter) -> Counter:
        back = dict(self.link_map)
        out: Counter = Counter()
        for lid, mult in chosen.items():
            if lid not in back:
                raise TraceError(f"link {lid} unknown to path-contraction step")
            out[back[lid]] += mult
        return out


@dataclass(frozen=True)
class LinkRestricted:
    """Links provably unnecessary dropped; remaining links renumbered."""

    dropped: tuple[int, ...]
    link_map: tuple[tuple[int, int], ...]  # (new link id, old link id)

    def lift(self, chosen: Counter) -> Counter:
        back = dict(self.link_map)
        out: Counter = Counter()
        for lid, mult in chosen.items():
            if lid not in back:
                raise TraceError(f"link {lid} was dropped by restriction")
            out[back[lid]] += mult
        return out


@dataclass(frozen=True)
class Emulated:
    """Weighted link replaced by a set of original unit-weight links."""

    target: int
    replacement: tuple[int, ...]

    def lift(self, chosen: Counter) -> Counter:
        if chosen.get(self.target, 0) == 0:
            return chosen
        out = Counter(chosen)
        mult = out.pop(self.target)
        for lid in self.replacement:
            out[lid] += mult
        return out


Step = Union[Contracted, TriangleFix, ShadowFix, PathContracted, LinkRestricted, Emulated]


@dataclass(frozen=True)
class ReductionTrace:
    steps: tuple[Step, ...] = ()

    def extended(self, *steps: Step) -> "ReductionTrace":
        return ReductionTrace(self.steps + tuple(steps))

    def lift(self, chosen: Counter) -> Counter:
        for step in reversed(self.steps):
            chosen = step.lift(chosen)
        return chosen


def _cost_str(c: Cost) -> str:
    if c == INF:
        return "inf"
    frac = Fraction(c)
    return f"{frac.numerator}/{frac.denominator}"


def step_to_json(step: Step) -> dict:
    if isinstance(step, Contracted):
        return {
            "type": "contracted",
            "node_map": list(step.node_map),
            "survivors": [list(s) for s in step.survivors],
        }
    if isinstance(step, TriangleFix):
        return {"type": "triangle_fix", "target": step.target,
                "left": step.left, "right": step.right}
    if isinstance(step, ShadowFix):
        out = {"type": "shadow_fix", "target": step.target, "source": step.source}
        if step.alternative is not None:
            out["alternative"] = step.alternative
        return out
    if isinstance(step, PathContracted):
        return {
            "type": "path_contracted",
            "node_map": list(step.node_map),
            "link_map": [list(s) for s in step.link_map],
        }
    if isinstance(step, LinkRestricted):
        return {"type": "link_restricted", "dropped": list(step.dropped),
                "link_map": [list(s) for s in step.link_map]}
    if isinstance(step, Emulated):
        return {"type": "emulated", "target": step.target,
                "replacement": list(step.replacement)}
    raise TypeError(f"unknown step {step!r}")


def trace_to_json(trace: ReductionTrace) -> list[dict]:
    return [step_to_json(s) for s in trace.steps]
