"""Gold-standard corpus ingestion and segmentation.

Plain UTF-8 text goes in; three parallel segmentations come out: sentences,
paragraphs, and articles. Splitting is rule-based and deterministic so that
segment boundaries, ids, and character counts are stable across runs --
character counts feed the distance normalizer downstream and must not move
when formatting does.

Whitespace policy: every run of whitespace inside a segment collapses to a
single space, so line breaks in the source never leak into segment text.
"""

from __future__ import annotations

import dataclasses
import re
import textwrap
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .errors import EmptyInput, MissingFile, RenderFailure, UnsupportedFormat

DEFAULT_ARTICLE_DELIM = r"(?:\r?\n[ \t]*){3,}"
_PARAGRAPH_DELIM = r"(?:\r?\n[ \t]*){2,}"
_SENTENCE_DELIM = r"(?<=[.!?])\s+"

RENDER_WRAP_COLUMNS = 48
RENDER_FONT_SIZE = 13  # bitmap default font; fixed so renders are stable


class SegmentKind(str, Enum):
    SENTENCE = "sentence"
    PARAGRAPH = "paragraph"
    ARTICLE = "article"


def normalize_whitespace(text: str) -> str:
    """Collapse any whitespace run to one space and strip the ends."""
    return " ".join(text.split())


@dataclass(frozen=True)
class GoldSegment:
    """One unit of gold-standard text at a given granularity."""

    id: str
    kind: SegmentKind
    text: str
    char_count: int
    word_count: int
    source_span: tuple[str, int, int]
    image_ref: str | None = None

    def __post_init__(self):
        if not self.text:
            raise ValueError("segment text must be non-empty")
        if self.char_count != len(self.text):
            raise ValueError("char_count does not match text")
        if self.word_count != len(self.text.split()):
            raise ValueError("word_count does not match text")

    @classmethod
    def build(
        cls,
        id: str,
        kind: SegmentKind,
        text: str,
        source_span: tuple[str, int, int],
        image_ref: str | None = None,
    ) -> "GoldSegment":
        return cls(
            id=id,
            kind=kind,
            text=text,
            char_count=len(text),
            word_count=len(text.split()),
            source_span=source_span,
            image_ref=image_ref,
        )

    def to_dict(self) -> dict:
        doc_id, start, end = self.source_span
        return {
            "v": 1,
            "id": self.id,
            "kind": self.kind.value,
            "text": self.text,
            "char_count": self.char_count,
            "word_count": self.word_count,
            "image_ref": self.image_ref,
            "source_span": {"doc_id": doc_id, "start": start, "end": end},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GoldSegment":
        span = d["source_span"]
        return cls(
            id=d["id"],
            kind=SegmentKind(d["kind"]),
            text=d["text"],
            char_count=d["char_count"],
            word_count=d["word_count"],
            source_span=(span["doc_id"], span["start"], span["end"]),
            image_ref=d.get("image_ref"),
        )


def _split_spans(text: str, delim: str, start: int, end: int) -> list[tuple[int, int]]:
    """Non-empty chunk spans of text[start:end] split on a delimiter regex."""
    spans = []
    pos = start
    for m in re.finditer(delim, text[start:end]):
        chunk = (pos, start + m.start())
        if text[chunk[0]:chunk[1]].strip():
            spans.append(chunk)
        pos = start + m.end()
    if text[pos:end].strip():
        spans.append((pos, end))
    return spans


def ingest(raw_text: str, doc_id: str, article_delim: str = DEFAULT_ARTICLE_DELIM) -> list[GoldSegment]:
    """Segment a document into sentences, paragraphs, and articles.

    Articles split on the (configurable) article delimiter, paragraphs on
    blank lines, sentences on terminal punctuation followed by whitespace.
    Inputs without delimiters degrade to a single article / paragraph.

    Raises:
        EmptyInput: if the text normalizes to nothing.
    """
    if not normalize_whitespace(raw_text):
        raise EmptyInput(f"document {doc_id!r} has no content")

    segments: list[GoldSegment] = []
    counters = {kind: 0 for kind in SegmentKind}

    def emit(kind: SegmentKind, span: tuple[int, int]) -> None:
        text = normalize_whitespace(raw_text[span[0]:span[1]])
        ordinal = counters[kind]
        counters[kind] += 1
        segments.append(
            GoldSegment.build(
                id=f"{doc_id}:{kind.value}:{ordinal:04d}",
                kind=kind,
                text=text,
                source_span=(doc_id, span[0], span[1]),
            )
        )

    for article_span in _split_spans(raw_text, article_delim, 0, len(raw_text)):
        emit(SegmentKind.ARTICLE, article_span)
        for para_span in _split_spans(raw_text, _PARAGRAPH_DELIM, *article_span):
            emit(SegmentKind.PARAGRAPH, para_span)
            for sent_span in _split_spans(raw_text, _SENTENCE_DELIM, *para_span):
                emit(SegmentKind.SENTENCE, sent_span)

    return segments


def attach_image(segment: GoldSegment, image_path: str | Path) -> GoldSegment:
    """Attach a raster image to a segment after validating it opens.

    Raises:
        MissingFile: path does not exist.
        UnsupportedFormat: file is not a readable raster image.
    """
    from PIL import Image, UnidentifiedImageError

    path = Path(image_path)
    if not path.is_file():
        raise MissingFile(str(path))
    try:
        with Image.open(path) as img:
            img.verify()
    except (UnidentifiedImageError, OSError) as exc:
        raise UnsupportedFormat(f"{path}: {exc}") from exc
    return dataclasses.replace(segment, image_ref=str(path))


def render_stand_in_image(segment: GoldSegment, out_dir: str | Path) -> GoldSegment:
    """Render the segment text to a PNG standing in for a page scan.

    Rendering is deterministic: fixed bitmap font, fixed wrap width, fixed
    colors. Identical text yields byte-identical image files.
    """
    from PIL import Image, ImageDraw, ImageFont

    if not segment.text:
        raise ValueError("segment text must be non-empty")

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    out_path = out_dir / (segment.id.replace(":", "_") + ".png")

    try:
        lines = textwrap.wrap(segment.text, width=RENDER_WRAP_COLUMNS) or [segment.text]
        font = ImageFont.load_default(size=RENDER_FONT_SIZE)
        draw_probe = ImageDraw.Draw(Image.new("L", (1, 1)))
        line_height = 0
        max_width = 0
        for line in lines:
            box = draw_probe.textbbox((0, 0), line, font=font)
            line_height = max(line_height, box[3])
            max_width = max(max_width, box[2])
        line_height += 4
        margin = 12
        img = Image.new("L", (max_width + 2 * margin, line_height * len(lines) + 2 * margin), 255)
        draw = ImageDraw.Draw(img)
        for i, line in enumerate(lines):
            draw.text((margin, margin + i * line_height), line, fill=0, font=font)
        img.save(out_path, format="PNG")
    except Exception as exc:  # pillow raises a wide range here
        raise RenderFailure(f"{segment.id}: {exc}") from exc

    return attach_image(segment, out_path)


def segments_of_kind(segments: list[GoldSegment], kind: SegmentKind) -> list[GoldSegment]:
    return [s for s in segments if s.kind == kind]
