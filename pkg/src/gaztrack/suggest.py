"""Rank candidate rule edits from reviewer/robot disagreements.

Each reviewed item carries the robot's group hint and the expert's final
class. Items where the two disagree expose rule gaps, split by what the
robot got wrong:

* the robot hinted Neutral but the expert found a substantive act — the
  rules under-select, so frequent tokens there become ``add_include``
  candidates;
* the robot hinted a substantive group but the expert filed Neutral —
  the rules over-select, so those tokens become ``add_exclude``
  candidates.

Tokens are scored by add-one-smoothed log-odds of their document
frequency in the disagreeing set against the theme's agreeing set, so a
token common to both ranks near zero and one unique to mistakes ranks
high. Suggestions are advisory; rule files are only ever edited by hand.
"""

from __future__ import annotations

import enum
import math
from collections import Counter
from dataclasses import dataclass

from .dataset import GroupClass, group_of
from .errors import InsufficientFeedback
from .features import tokenize
from .store import ReviewItem, ReviewStatus, Store


class Direction(enum.Enum):
    ADD_INCLUDE = "add_include"
    ADD_EXCLUDE = "add_exclude"


@dataclass(frozen=True)
class RefinementSuggestion:
    theme_name: str
    candidate_token: str
    score: float
    direction: Direction
    evidence_count: int

    def to_dict(self) -> dict:
        return {
            "theme_name": self.theme_name,
            "candidate_token": self.candidate_token,
            "score": self.score,
            "direction": self.direction.value,
            "evidence_count": self.evidence_count,
        }


def _annotated_group(item: ReviewItem) -> GroupClass:
    assert item.annotation is not None  # reviewed items always carry one
    return group_of(item.annotation.fine_class)


def _agrees(item: ReviewItem) -> bool:
    return _annotated_group(item) is item.robot_group_hint


def _doc_frequencies(items: list[ReviewItem]) -> Counter:
    df: Counter = Counter()
    for item in items:
        df.update(set(tokenize(item.doc.body)))
    return df


def _ranked(
    theme: str,
    direction: Direction,
    disagreeing: list[ReviewItem],
    agreeing: list[ReviewItem],
    top_n: int,
) -> list[RefinementSuggestion]:
    if not disagreeing:
        return []
    df_dis = _doc_frequencies(disagreeing)
    df_agr = _doc_frequencies(agreeing)
    n_dis = len(disagreeing)
    n_agr = len(agreeing)
    scored: list[tuple[str, float, int]] = []
    for token, d in df_dis.items():
        rate_dis = (d + 1) / (n_dis + 2)
        rate_agr = (df_agr.get(token, 0) + 1) / (n_agr + 2)
        score = math.log(rate_dis / rate_agr)
        if score > 0:
            scored.append((token, score, d))
    scored.sort(key=lambda row: (-row[1], row[0]))
    return [
        RefinementSuggestion(
            theme_name=theme,
            candidate_token=token,
            score=score,
            direction=direction,
            evidence_count=evidence,
        )
        for token, score, evidence in scored[:top_n]
    ]


def suggest_refinements(store: Store, top_n: int = 5) -> list[RefinementSuggestion]:
    """Top candidate tokens per (theme, direction), deterministic order.

    Needs at least one reviewed item agreeing with the robot hint and one
    disagreeing, store-wide; otherwise there is no contrast to score and
    InsufficientFeedback is raised. Themes come out alphabetically, with
    add_include before add_exclude, then by descending score and token.
    """
    reviewed = [
        it
        for it in store.items(ReviewStatus.REVIEWED)
        if it.robot_group_hint is not None
    ]
    if not any(_agrees(it) for it in reviewed) or not any(
        not _agrees(it) for it in reviewed
    ):
        raise InsufficientFeedback()
    suggestions: list[RefinementSuggestion] = []
    for theme in sorted({t for it in reviewed for t in it.matched_themes}):
        under = [it for it in reviewed if theme in it.matched_themes]
        agreeing = [it for it in under if _agrees(it)]
        missed = [
            it
            for it in under
            if it.robot_group_hint is GroupClass.NEUTRAL
            and _annotated_group(it) is not GroupClass.NEUTRAL
        ]
        captured = [
            it
            for it in under
            if it.robot_group_hint is not GroupClass.NEUTRAL
            and _annotated_group(it) is GroupClass.NEUTRAL
        ]
        suggestions.extend(
            _ranked(theme, Direction.ADD_INCLUDE, missed, agreeing, top_n)
        )
        suggestions.extend(
            _ranked(theme, Direction.ADD_EXCLUDE, captured, agreeing, top_n)
        )
    return suggestions
