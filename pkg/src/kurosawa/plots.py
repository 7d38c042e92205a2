"""Four-act plot annotation and prompt assembly for the generation profiles.

A plot is annotated by inserting one tag at the end of each act; the five
generation profiles control storyline length, genre conditioning, and whether
the model is expected to emit those tags.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import (
    DuplicateTagError,
    EmptyActError,
    GenresForbiddenError,
    GenresRequiredError,
    InvalidBoundariesError,
    Issue,
    MissingTagError,
    OutOfOrderTagsError,
    ValidationReport,
    issue,
)
from .model import ACT_NAMES, Genre, PlotActs, word_count

ACT_TAGS = tuple(f"<{name}>" for name in ACT_NAMES)

# default fine-tune record delimiters; recorded in export headers
PROMPT_SEPARATOR = "\n\n###\n\n"
STOP_SEQUENCE = "\n<|end|>"

SHORT_STORYLINE_WORDS = (15, 40)
LONG_STORYLINE_WORDS = (30, 200)
PLOT_WORDS = (600, 800)
SCENE_WORDS = (200, 500)


class StorylineKind(str, Enum):
    SHORT = "short"
    LONG = "long"


class GenerationProfile(str, Enum):
    """The five fine-tune/generation variants.

    O is the unannotated baseline; AS/AL add act tags to the output for short
    and long storylines; ASG/ALG additionally condition on genres.
    """

    O = "O"
    AS = "AS"
    AL = "AL"
    ASG = "ASG"
    ALG = "ALG"

    @property
    def annotated_output(self) -> bool:
        return self is not GenerationProfile.O

    @property
    def storyline_kind(self) -> StorylineKind:
        if self in (GenerationProfile.AL, GenerationProfile.ALG):
            return StorylineKind.LONG
        return StorylineKind.SHORT

    @property
    def genres_included(self) -> bool:
        return self in (GenerationProfile.ASG, GenerationProfile.ALG)


@dataclass(frozen=True)
class ActBoundaries:
    """Character offsets where acts one, two-a, and two-b end (act three ends at text end)."""

    ends: tuple[int, int, int]

    def validate(self, plot: str) -> None:
        e = self.ends
        if not (0 < e[0] < e[1] < e[2] < len(plot)):
            raise InvalidBoundariesError(
                f"boundaries {e} must be strictly increasing within (0, {len(plot)})",
            )
        for offset in e:
            if not (plot[offset].isspace() or plot[offset - 1].isspace()):
                raise InvalidBoundariesError(
                    f"boundary {offset} splits a word (needs adjacent whitespace)",
                )


def insert_act_tags(plot: str, boundaries: ActBoundaries) -> str:
    """Insert the four act tags into an unannotated plot."""
    boundaries.validate(plot)
    e0, e1, e2 = boundaries.ends
    return (
        plot[:e0] + f" {ACT_TAGS[0]}"
        + plot[e0:e1] + f" {ACT_TAGS[1]}"
        + plot[e1:e2] + f" {ACT_TAGS[2]}"
        + plot[e2:] + f" {ACT_TAGS[3]}"
    )


def strip_act_tags(annotated: str) -> str:
    """Remove act tags, collapsing runs of spaces they leave behind."""
    out = annotated
    for tag in ACT_TAGS:
        out = out.replace(f" {tag}", "").replace(tag, "")
    return out


def annotate_acts(acts: PlotActs) -> str:
    """Re-serialize parsed acts, each body followed by its tag."""
    return " ".join(
        f"{body} {tag}" for body, tag in zip(acts.as_tuple(), ACT_TAGS)
    )


def parse_acts(annotated: str) -> PlotActs:
    """Split annotated text on the four act tags, requiring each exactly once, in order."""
    positions = []
    for name, tag in zip(ACT_NAMES, ACT_TAGS):
        first = annotated.find(tag)
        if first == -1:
            raise MissingTagError(name)
        if annotated.find(tag, first + 1) != -1:
            raise DuplicateTagError(name)
        positions.append(first)
    if positions != sorted(positions):
        raise OutOfOrderTagsError()

    acts = []
    start = 0
    for name, tag, pos in zip(ACT_NAMES, ACT_TAGS, positions):
        body = annotated[start:pos].strip()
        if not body:
            raise EmptyActError(name)
        acts.append(body)
        start = pos + len(tag)
    return PlotActs(*acts)


def validate_annotated_plot(annotated: str) -> ValidationReport:
    """Collect structural errors and length warnings without raising."""
    report = ValidationReport()
    acts: PlotActs | None = None
    try:
        acts = parse_acts(annotated)
    except (MissingTagError, DuplicateTagError, OutOfOrderTagsError, EmptyActError) as exc:
        report.add_error(exc.as_issue())

    total = word_count(strip_act_tags(annotated))
    lo, hi = PLOT_WORDS
    if not lo <= total <= hi:
        report.add_warning(issue(
            "LengthOutOfRange",
            f"plot is {total} words, expected {lo}-{hi}",
            count=total, min=lo, max=hi,
        ))
    if acts is not None and total > 0:
        for name, text in zip(ACT_NAMES, acts.as_tuple()):
            share = word_count(text) / total
            if share < 0.05:
                report.add_warning(issue(
                    "ShortAct",
                    f"act {name!r} is only {share:.0%} of the plot",
                    act=name, share=share,
                ))
    return report


def storyline_warnings(storyline: str, kind: StorylineKind) -> list[Issue]:
    """Word-count band check for a storyline; violations warn, never block."""
    lo, hi = SHORT_STORYLINE_WORDS if kind is StorylineKind.SHORT else LONG_STORYLINE_WORDS
    count = word_count(storyline)
    if lo <= count <= hi:
        return []
    return [issue(
        "LengthViolation",
        f"{kind.value} storyline is {count} words, expected {lo}-{hi}",
        count=count, min=lo, max=hi,
    )]


def build_prompt(
    storyline: str,
    genres: list[Genre],
    profile: GenerationProfile,
    separator: str = PROMPT_SEPARATOR,
) -> str:
    """Assemble the model prompt: optional genre prefix, storyline, separator.

    Genres join with ", " and terminate with ". " so prompts stay
    deterministic and reversible.
    """
    if not storyline.strip():
        raise ValueError("storyline must be non-empty")
    if profile.genres_included and not genres:
        raise GenresRequiredError(f"profile {profile.value} requires at least one genre")
    if not profile.genres_included and genres:
        raise GenresForbiddenError(f"profile {profile.value} does not take genres")
    if genres:
        return ", ".join(genres) + ". " + storyline + separator
    return storyline + separator
