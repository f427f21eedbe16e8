"""Trail scoring functions.

A trail is scored from the page relevances mu along it. ``sum_distinct``
counts each content class once and divides by (length + C), penalising
revisits and trivial singletons. ``discounted`` decays position i by
gamma^(i-1). ``weighted`` additionally multiplies position i by
delta^c(i), where c(i) counts earlier positions holding equal content.
"""

from __future__ import annotations

from typing import Mapping, Sequence

from .graph import ContentClasses

SCORING_FUNCTIONS = ("sum_distinct", "discounted", "weighted")


def _class_of(classes: ContentClasses | None, node: int) -> int:
    return node if classes is None else classes.class_of(node)


def geometric_sum(a: float, x: int, y: int) -> float:
    """sum of a^k for k = x..y via the closed form a^x (1 - a^(y-x+1)) / (1 - a)."""
    if a < 0.0 or a > 1.0:
        raise ValueError("a must be in [0, 1]")
    if x > y:
        raise ValueError("x must be <= y")
    if a == 1.0:
        return float(y - x + 1)
    return (a**x) * (1.0 - a ** (y - x + 1)) / (1.0 - a)


def score_sum_distinct(
    nodes: Sequence[int],
    mu: Mapping[int, float],
    c: float = 1.0,
    classes: ContentClasses | None = None,
) -> float:
    if not nodes:
        raise ValueError("empty trail")
    seen: set[int] = set()
    total = 0.0
    for node in nodes:
        key = _class_of(classes, node)
        if key not in seen:
            seen.add(key)
            total += mu.get(node, 0.0)
    return total / (len(nodes) + c)


def score_discounted(nodes: Sequence[int], mu: Mapping[int, float], gamma: float) -> float:
    if not nodes:
        raise ValueError("empty trail")
    if not 0.0 < gamma < 1.0:
        raise ValueError("gamma must be in (0, 1)")
    total = 0.0
    weight = 1.0
    for node in nodes:
        total += mu.get(node, 0.0) * weight
        weight *= gamma
    return total


def score_weighted(
    nodes: Sequence[int],
    mu: Mapping[int, float],
    gamma: float,
    delta: float,
    classes: ContentClasses | None = None,
) -> float:
    if not nodes:
        raise ValueError("empty trail")
    if not 0.0 < gamma < 1.0:
        raise ValueError("gamma must be in (0, 1)")
    if not 0.0 < delta <= 1.0:
        raise ValueError("delta must be in (0, 1]")
    seen: dict[int, int] = {}
    total = 0.0
    weight = 1.0
    for node in nodes:
        key = _class_of(classes, node)
        repeats = seen.get(key, 0)
        total += mu.get(node, 0.0) * weight * delta**repeats
        seen[key] = repeats + 1
        weight *= gamma
    return total
