#!/usr/bin/env python3
"""Regenerate the cross-language fixtures the UI tests check against.

The browser client must tokenize served text and reconstruct fix edits
exactly like the campaign server does; these fixtures pin the server-side
results so the TypeScript tests can prove byte-level parity.

Run from the frontend/ directory:  python3 scripts/generate_fixtures.py
"""

import json
import re
from pathlib import Path

from ocrforge.campaign import apply_fix_edits

OUT = Path(__file__).parent.parent / "tests" / "fixtures"

TOKENIZATION_TEXTS = [
    "the cat sat on the mat",
    "a go-\nod morning to all",
    "double  spaces   and\ttabs here",
    "leading and trailing   ",
    "   indented start",
    "one",
    "line one\nline two\nline three",
    "punctuation, stays! with? tokens.",
    "ca4 numbers 42 mixed a1b2",
    "hy-\nphen at start of text",
]

FIX_CASES = [
    {"noisy_text": "the c4t sat", "edits": [{"index": 1, "replacement": "cat"}]},
    {"noisy_text": "a go-\nod morning", "edits": [{"index": 1, "replacement": "good"}, {"index": 2, "replacement": ""}]},
    {"noisy_text": "acat sat here", "edits": [{"index": 0, "replacement": "a cat"}]},
    {"noisy_text": "drop the first", "edits": [{"index": 0, "replacement": ""}]},
    {"noisy_text": "drop the last", "edits": [{"index": 2, "replacement": ""}]},
    {"noisy_text": "keep  double  spaces", "edits": [{"index": 1, "replacement": "DOUBLE"}]},
    {"noisy_text": "two edits here now", "edits": [{"index": 0, "replacement": "TWO"}, {"index": 3, "replacement": "NOW"}]},
    {"noisy_text": "only", "edits": [{"index": 0, "replacement": ""}]},
    {"noisy_text": "unchanged words stay", "edits": []},
    {"noisy_text": "tab\tseparated\ttokens", "edits": [{"index": 1, "replacement": "joined"}]},
]


def token_spans(text):
    return [
        {"index": i, "text": m.group(0), "start": m.start(), "end": m.end()}
        for i, m in enumerate(re.finditer(r"\S+", text))
    ]


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    tokenization = [{"text": t, "tokens": token_spans(t)} for t in TOKENIZATION_TEXTS]
    (OUT / "tokenization.json").write_text(json.dumps(tokenization, indent=1) + "\n")

    fixes = []
    for case in FIX_CASES:
        fixes.append({**case, "expected": apply_fix_edits(case["noisy_text"], case["edits"])})
    (OUT / "fix_reconstruction.json").write_text(json.dumps(fixes, indent=1) + "\n")
    print(f"wrote {len(tokenization)} tokenization and {len(fixes)} reconstruction fixtures")


if __name__ == "__main__":
    main()
