"""ocrforge: crowdsourced OCR post-correction campaigns, end to end.

Ingest gold text, inject reproducible OCR-like noise, assemble and serve
micro-tasks (proofing or two-phase find/fix), score worker output with
character- and word-level metrics, and pick the campaign setup that matches
a stated goal.
"""

from .align import EditCounts, WordAlignment, char_mindist, slot_intersection, word_align, word_errors
from .campaign import (
    Campaign,
    Condition,
    FindPayload,
    FixPayload,
    ProofPayload,
    Submission,
    TaskSpec,
    TaskStructure,
    apply_fix_edits,
)
from .corpus import GoldSegment, SegmentKind, attach_image, ingest, render_stand_in_image
from .lexicon import Lexicon, default_lexicon
from .metrics import (
    AccuracyReport,
    EfficiencyReport,
    FindFixBreakdown,
    ProofingBreakdown,
    accuracy,
    aggregate,
    efficiency_findfix,
    efficiency_proofing,
    findfix_breakdown,
    proofing_breakdown,
)
from .noise import ErrorClass, ErrorSpan, NoisySegment, corrupt, planned_error_count
from .rng import SplitMix64
from .simworker import WorkerProfile, run_workers, simulate
from .strategy import Goal, Recommendation, Segmentation, StrategyQuery, Structure, recommend

__version__ = "0.1.0"

__all__ = [
    "AccuracyReport",
    "Campaign",
    "Condition",
    "EditCounts",
    "EfficiencyReport",
    "ErrorClass",
    "ErrorSpan",
    "FindFixBreakdown",
    "FindPayload",
    "FixPayload",
    "GoldSegment",
    "Goal",
    "Lexicon",
    "NoisySegment",
    "ProofPayload",
    "ProofingBreakdown",
    "Recommendation",
    "SegmentKind",
    "Segmentation",
    "SplitMix64",
    "StrategyQuery",
    "Structure",
    "Submission",
    "TaskSpec",
    "TaskStructure",
    "WordAlignment",
    "WorkerProfile",
    "accuracy",
    "aggregate",
    "apply_fix_edits",
    "attach_image",
    "char_mindist",
    "corrupt",
    "default_lexicon",
    "efficiency_findfix",
    "efficiency_proofing",
    "findfix_breakdown",
    "ingest",
    "planned_error_count",
    "proofing_breakdown",
    "recommend",
    "render_stand_in_image",
    "run_workers",
    "simulate",
    "slot_intersection",
    "word_align",
    "word_errors",
]
