"""Campaign strategy recommender.

Four deterministic rule trees map a campaign goal to a task configuration:
one tree for overall accuracy, one for efficiency (cost), and one each for
minimizing the error classes of the two task structures. Every fired rule
is appended to the recommendation's rationale, quoting the finding it rests
on, so a recommendation can always be audited back to its evidence.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .corpus import SegmentKind


class Goal(str, Enum):
    MAX_ACCURACY = "accuracy"
    MAX_EFFICIENCY = "efficiency"
    MIN_FIND_MISS = "find-miss"
    MIN_FIND_WRONG = "find-wrong"
    MIN_FIX_WRONG = "fix-wrong"
    MIN_PROOF_MISS = "proof-miss"
    MIN_PROOF_WRONG = "proof-wrong"


class Structure(str, Enum):
    PROOFING = "proofing"
    FIND_FIX = "findfix"


class Segmentation(str, Enum):
    AS_IS = "as-is"
    SPLIT_TO_PARAGRAPHS = "split-to-paragraphs"


# Goals whose trees call for the image: reducing wrong-type errors only.
_IMAGE_GOALS = {Goal.MIN_FIND_WRONG, Goal.MIN_FIX_WRONG, Goal.MIN_PROOF_WRONG}


@dataclass(frozen=True)
class StrategyQuery:
    goal: Goal
    image_available: bool
    length: SegmentKind
    article_splittable: bool = False

    def to_dict(self) -> dict:
        return {
            "goal": self.goal.value,
            "image_available": self.image_available,
            "length": self.length.value,
            "article_splittable": self.article_splittable,
        }


@dataclass(frozen=True)
class Recommendation:
    structure: Structure
    show_image: bool
    segmentation: Segmentation
    rationale: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "structure": self.structure.value,
            "show_image": self.show_image,
            "segmentation": self.segmentation.value,
            "rationale": list(self.rationale),
        }


def _accuracy_tree(q: StrategyQuery, why: list[str]) -> tuple[Structure, bool, Segmentation]:
    show_image = q.image_available
    if q.image_available:
        why.append('accuracy: "If the image exists, it should be displayed" to improve corrections')
    segmentation = Segmentation.AS_IS
    structure = Structure.FIND_FIX
    if q.length == SegmentKind.ARTICLE:
        if not q.image_available:
            why.append('accuracy: without an image "there is no need to split the article"')
        elif q.article_splittable:
            segmentation = Segmentation.SPLIT_TO_PARAGRAPHS
            why.append('accuracy: "long articles should be split into paragraphs" (paragraph context is optimal)')
        else:
            structure = Structure.PROOFING
            why.append('accuracy: "full articles that cannot be split into paragraphs, where Proofing was found more effective"')
    if structure == Structure.FIND_FIX:
        why.append('accuracy: "The two-phase (Find-Fix) task structure should be used in all scenarios" (bar the unsplittable-article exception)')
    return structure, show_image, segmentation


def _efficiency_tree(q: StrategyQuery, why: list[str]) -> tuple[Structure, bool, Segmentation]:
    why.append('efficiency: "hiding the image even if it is available and using a single-stage Proofing structure" is beneficial')
    why.append("efficiency: a two-stage structure requires additional (partial) reads of the text")
    return Structure.PROOFING, False, Segmentation.AS_IS


def _error_tree(q: StrategyQuery, why: list[str]) -> tuple[Structure, bool, Segmentation]:
    findfix_goal = q.goal in (Goal.MIN_FIND_MISS, Goal.MIN_FIND_WRONG, Goal.MIN_FIX_WRONG)
    structure = Structure.FIND_FIX if findfix_goal else Structure.PROOFING
    why.append(
        f"{q.goal.value}: error class belongs to the "
        f"{'two-phase Find-Fix' if findfix_goal else 'single-phase Proofing'} structure"
    )

    show_image = q.image_available and q.goal in _IMAGE_GOALS
    if q.goal in _IMAGE_GOALS:
        if findfix_goal:
            why.append('find-fix errors: "the image is used only for Find-Wrong and Fix-Wrong errors\' reduction"')
        else:
            why.append('proofing errors: "the image should be displayed only for reducing Proofing-Wrong errors"')
        if not q.image_available:
            why.append("no scanned image is available, so it cannot be shown")
    elif q.goal == Goal.MIN_PROOF_MISS:
        why.append('proof-miss: presenting the image "increases the percentage of Miss type errors for all text lengths", so it stays hidden')
    else:
        why.append("miss-type errors: the image does not reduce them, so it stays hidden")

    segmentation = Segmentation.AS_IS
    if q.length == SegmentKind.ARTICLE and q.article_splittable:
        if q.goal == Goal.MIN_FIND_MISS:
            segmentation = Segmentation.SPLIT_TO_PARAGRAPHS
            why.append('find-miss: workers "miss relatively more OCR errors (Find-Miss) when fixing sentences and articles than paragraphs"')
        elif q.goal == Goal.MIN_PROOF_WRONG:
            segmentation = Segmentation.SPLIT_TO_PARAGRAPHS
            why.append('proof-wrong: "the longer the text, the more wrong corrections", so work on the shortest available unit')
    return structure, show_image, segmentation


def recommend(query: StrategyQuery) -> Recommendation:
    """Resolve a strategy query to a task configuration with its rationale.

    Total and deterministic: every query reaches exactly one leaf, and the
    rationale lists each rule fired on the way there.
    """
    why: list[str] = []
    if query.goal == Goal.MAX_ACCURACY:
        structure, show_image, segmentation = _accuracy_tree(query, why)
    elif query.goal == Goal.MAX_EFFICIENCY:
        structure, show_image, segmentation = _efficiency_tree(query, why)
    else:
        structure, show_image, segmentation = _error_tree(query, why)
    return Recommendation(
        structure=structure,
        show_image=show_image,
        segmentation=segmentation,
        rationale=tuple(why),
    )


def all_queries() -> list[StrategyQuery]:
    """The full query grid (7 goals x 2 image x 3 lengths x 2 splittable)."""
    out = []
    for goal in Goal:
        for image in (False, True):
            for length in SegmentKind:
                for splittable in (False, True):
                    out.append(StrategyQuery(goal, image, length, splittable))
    return out
