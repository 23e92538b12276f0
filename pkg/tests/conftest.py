import pytest

from ocrforge.campaign import Campaign
from ocrforge.corpus import SegmentKind, attach_image, ingest, segments_of_kind
from ocrforge.noise import corrupt


def synthetic_document(sentences_per_paragraph=15, paragraphs_per_article=2, articles=2):
    """A document with a known sentence/paragraph/article structure."""
    fillers = [
        "The quick brown fox jumps over the lazy dog near the old barn",
        "A small boat drifted slowly past the quiet harbor in the morning",
        "Every window of the tall house was lit against the winter evening",
        "The children walked to school along the river road every day",
        "Some of the finest gardens in the city belong to modest homes",
    ]
    counter = 0
    article_texts = []
    for _ in range(articles):
        paragraphs = []
        for _ in range(paragraphs_per_article):
            sentences = []
            for _ in range(sentences_per_paragraph):
                sentences.append(f"{fillers[counter % len(fillers)]} number {counter}.")
                counter += 1
            paragraphs.append(" ".join(sentences))
        article_texts.append("\n\n".join(paragraphs))
    return "\n\n\n\n".join(article_texts)


class StepClock:
    """Deterministic clock advancing manually (seconds)."""

    def __init__(self, start=0.0):
        self.now = start

    def __call__(self):
        return self.now

    def advance(self, seconds):
        self.now += seconds
        return self.now


@pytest.fixture
def step_clock():
    return StepClock()


@pytest.fixture
def corpus_segments(tmp_path):
    """Gold segments of all kinds, each with a stand-in image attached."""
    from PIL import Image

    img_path = tmp_path / "stand_in.png"
    Image.new("L", (8, 8), 255).save(img_path)
    segments = ingest(synthetic_document(), "doc")
    return [attach_image(s, img_path) for s in segments]


@pytest.fixture
def loaded_campaign(tmp_path, corpus_segments, step_clock):
    """Campaign with gold and noisy segments for every kind."""
    camp = Campaign(tmp_path / "campaign", clock=step_clock, seed=7)
    camp.add_segments(corpus_segments)
    camp.add_noisy([corrupt(s, 0.8, seed=100 + i) for i, s in enumerate(corpus_segments)])
    return camp


def noisy_of_kind(campaign, kind: SegmentKind):
    return [
        campaign.noisy[s.id]
        for s in segments_of_kind(list(campaign.gold.values()), kind)
    ]
