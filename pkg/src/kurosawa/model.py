"""Core domain types and the canonical tokenizer.

Every word count and n-gram metric in the workbench goes through
:func:`tokenize`, so length checks and scores stay reproducible across
modules.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field
from enum import Enum


class ElementKind(str, Enum):
    SLUGLINE = "slugline"
    ACTION = "action"
    CHARACTER_CUE = "character_cue"
    DIALOGUE = "dialogue"
    TRANSITION = "transition"


@dataclass(frozen=True)
class ScreenplayElement:
    """One screenplay building block: a slugline, action block, cue, dialogue, or transition.

    ``line_span`` is a half-open pair of 0-based source line indices recording
    where the element came from; synthesized elements carry (0, 0).  It is
    provenance metadata, so equality compares only kind and text.
    """

    kind: ElementKind
    text: str
    line_span: tuple[int, int] = field(default=(0, 0), compare=False)

    def __post_init__(self) -> None:
        if not self.text.strip():
            raise ValueError("element text must be non-empty after whitespace normalization")
        start, end = self.line_span
        if (start, end) != (0, 0) and not start < end:
            raise ValueError(f"line_span start must precede end, got {self.line_span}")

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "text": self.text, "line_span": list(self.line_span)}

    @classmethod
    def from_dict(cls, d: dict) -> "ScreenplayElement":
        return cls(
            kind=ElementKind(d["kind"]),
            text=d["text"],
            line_span=tuple(d.get("line_span", (0, 0))),
        )


@dataclass(frozen=True)
class Scene:
    """An ordered run of screenplay elements, optionally with a short description.

    The description (15-40 words when present) is curation metadata and does
    not participate in equality.
    """

    elements: tuple[ScreenplayElement, ...]
    description: str | None = field(default=None, compare=False)

    def __init__(self, elements, description: str | None = None):
        object.__setattr__(self, "elements", tuple(elements))
        object.__setattr__(self, "description", description)

    def check(self) -> list[str]:
        """Return invariant violations (empty list when the scene is well formed)."""
        problems = []
        for i, el in enumerate(self.elements):
            if el.kind is ElementKind.DIALOGUE:
                prev = self.elements[i - 1] if i > 0 else None
                if prev is None or prev.kind not in (ElementKind.CHARACTER_CUE, ElementKind.DIALOGUE):
                    problems.append(f"dialogue at index {i} not preceded by a character cue or dialogue")
        return problems

    def to_dict(self) -> dict:
        d: dict = {"elements": [el.to_dict() for el in self.elements]}
        if self.description is not None:
            d["description"] = self.description
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Scene":
        return cls(
            elements=[ScreenplayElement.from_dict(e) for e in d["elements"]],
            description=d.get("description"),
        )


@dataclass(frozen=True)
class Script:
    title: str
    scenes: tuple[Scene, ...]

    def __init__(self, title: str, scenes):
        object.__setattr__(self, "title", title)
        object.__setattr__(self, "scenes", tuple(scenes))

    def to_dict(self) -> dict:
        return {"title": self.title, "scenes": [s.to_dict() for s in self.scenes]}

    @classmethod
    def from_dict(cls, d: dict) -> "Script":
        return cls(title=d["title"], scenes=[Scene.from_dict(s) for s in d["scenes"]])


ACT_NAMES = ("one", "two-a", "two-b", "three")


@dataclass(frozen=True)
class PlotActs:
    """A plot split into the four-act structure: setup, rise to midpoint, downfall, finale."""

    act_one: str
    act_two_a: str
    act_two_b: str
    act_three: str

    def __post_init__(self) -> None:
        for name, text in zip(ACT_NAMES, self.as_tuple()):
            if not text.strip():
                raise ValueError(f"act {name!r} must be non-empty")

    def as_tuple(self) -> tuple[str, str, str, str]:
        return (self.act_one, self.act_two_a, self.act_two_b, self.act_three)

    def joined(self) -> str:
        """The unannotated plot text, acts joined with single spaces."""
        return " ".join(self.as_tuple())

    def to_dict(self) -> dict:
        return {
            "one": self.act_one,
            "two_a": self.act_two_a,
            "two_b": self.act_two_b,
            "three": self.act_three,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PlotActs":
        return cls(d["one"], d["two_a"], d["two_b"], d["three"])


# Genre labels are plain strings checked against a configurable vocabulary.
Genre = str

DEFAULT_GENRES: tuple[Genre, ...] = (
    "Drama", "Comedy", "Romance", "Action", "Thriller", "Crime", "Adventure",
    "Sci-Fi", "Horror", "Fantasy", "Mystery", "Family", "Biography", "Musical",
    "War", "History", "Sport", "Western",
)


def canonical_genre(name: str, vocabulary: tuple[Genre, ...] = DEFAULT_GENRES) -> Genre | None:
    """Map a genre name to its vocabulary spelling, or None when unknown."""
    folded = name.strip().casefold()
    for known in vocabulary:
        if known.casefold() == folded:
            return known
    return None


TokenSeq = list[str]


def _is_edge_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def _strip_edges(token: str) -> str:
    start, end = 0, len(token)
    while start < end and _is_edge_punct(token[start]):
        start += 1
    while end > start and _is_edge_punct(token[end - 1]):
        end -= 1
    return token[start:end]


def tokenize(text: str) -> TokenSeq:
    """Canonical tokenizer: lowercase, split on whitespace, strip edge punctuation.

    Internal apostrophes and hyphens survive because stripping only touches
    token edges.  Tokens that strip to nothing are dropped, so the output is
    stable under re-tokenizing its own space-joined form.
    """
    tokens = []
    for raw in text.lower().split():
        token = _strip_edges(raw)
        if token:
            tokens.append(token)
    return tokens


def word_count(text: str) -> int:
    return len(tokenize(text))
