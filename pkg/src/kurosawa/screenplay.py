"""Screenplay line classification, scene segmentation, and the tagged wire format.

The classifier is a total function driven by layout conventions (indentation,
capitalization, keyword sets), so any text file can be ingested.  Scenes are
cut at sluglines; the tagged format wraps each kept element in begin/end tags
and is the interchange format for datasets and model output.
"""

from __future__ import annotations

import re
import textwrap
from dataclasses import dataclass, field, replace
from enum import Enum

from .errors import (
    EmptyElementError,
    EmptyInputError,
    Issue,
    NoElementsError,
    StrayTextError,
    UnbalancedTagsError,
    UnsupportedElementError,
    issue,
)
from .model import ElementKind, Scene, ScreenplayElement, Script

DEFAULT_TRANSITION_KEYWORDS = frozenset({
    "CUT TO:", "FADE IN:", "FADE OUT.", "FADE OUT:", "FADE TO:",
    "DISSOLVE TO:", "SMASH CUT TO:", "MATCH CUT TO:",
})
DEFAULT_SLUGLINE_PREFIXES = frozenset({"INT.", "EXT.", "INT./EXT.", "EXT./INT.", "I/E."})
DEFAULT_CUE_EXTENSIONS = frozenset({"V.O.", "O.S.", "O.C.", "CONT'D"})

SYNTHESIZED_SLUGLINE = "INT. UNKNOWN - DAY"


@dataclass(frozen=True)
class LayoutConfig:
    """Column thresholds and keyword sets that drive line classification."""

    cue_indent_min: int = 20
    dialogue_indent_min: int = 8
    transition_keywords: frozenset[str] = DEFAULT_TRANSITION_KEYWORDS
    slugline_prefixes: frozenset[str] = DEFAULT_SLUGLINE_PREFIXES
    cue_extension_allowlist: frozenset[str] = DEFAULT_CUE_EXTENSIONS

    def __post_init__(self) -> None:
        if not 0 <= self.dialogue_indent_min < self.cue_indent_min:
            raise ValueError("need 0 <= dialogue_indent_min < cue_indent_min")
        for name in ("transition_keywords", "slugline_prefixes", "cue_extension_allowlist"):
            if not getattr(self, name):
                raise ValueError(f"{name} must be non-empty")
        # accept plain sets from callers
        for name in ("transition_keywords", "slugline_prefixes", "cue_extension_allowlist"):
            value = getattr(self, name)
            if not isinstance(value, frozenset):
                object.__setattr__(self, name, frozenset(value))


DEFAULT_LAYOUT = LayoutConfig()


class LineClass(str, Enum):
    SLUGLINE = "slugline"
    TRANSITION = "transition"
    CHARACTER_CUE = "character_cue"
    DIALOGUE_LINE = "dialogue_line"
    ACTION_LINE = "action_line"
    PARENTHETICAL = "parenthetical"
    NOISE = "noise"
    BLANK = "blank"


_PAGE_NUMBER_RE = re.compile(r"^[-.(]*\d+[-.)]*$")
_NUMERIC_DATE_RE = re.compile(r"^\d{1,2}[/.-]\d{1,2}[/.-]\d{2,4}$")
_MONTH_DATE_RE = re.compile(
    r"^(JANUARY|FEBRUARY|MARCH|APRIL|MAY|JUNE|JULY|AUGUST|SEPTEMBER|OCTOBER"
    r"|NOVEMBER|DECEMBER)\s+\d{1,2}\s*,?\s*\d{4}$",
)
_CUE_EXTENSION_RE = re.compile(r"\(([^()]*)\)\s*$")


def _is_noise(trimmed: str) -> bool:
    upper = trimmed.upper()
    if upper in ("(CONTINUED)", "CONTINUED:"):
        return True
    if _PAGE_NUMBER_RE.match(trimmed):
        return True
    if _NUMERIC_DATE_RE.match(trimmed) or _MONTH_DATE_RE.match(upper):
        return True
    return False


def _is_fully_uppercase(text: str) -> bool:
    return text == text.upper() and any(ch.isalpha() for ch in text)


def classify_line(raw_line: str, prev_class: LineClass, config: LayoutConfig = DEFAULT_LAYOUT) -> LineClass:
    """Classify one source line; first matching rule wins.

    ``prev_class`` is the class of the immediately preceding source line
    (``BLANK`` at the top of a file); dialogue and parentheticals only attach
    to an open cue/dialogue block.
    """
    if "\n" in raw_line or "\r" in raw_line:
        raise ValueError("classify_line takes a single line without line breaks")

    trimmed = raw_line.strip()
    if not trimmed:
        return LineClass.BLANK
    if _is_noise(trimmed):
        return LineClass.NOISE
    upper = trimmed.upper()
    if any(upper.startswith(prefix) for prefix in config.slugline_prefixes):
        return LineClass.SLUGLINE
    if _is_fully_uppercase(trimmed) and (trimmed.endswith("TO:") or trimmed in config.transition_keywords):
        return LineClass.TRANSITION

    indent = len(raw_line) - len(raw_line.lstrip())
    cue_body = trimmed
    match = _CUE_EXTENSION_RE.search(trimmed)
    if match and match.group(1).strip().upper() in config.cue_extension_allowlist:
        cue_body = trimmed[: match.start()].strip()
    if (
        cue_body
        and _is_fully_uppercase(cue_body)
        and indent >= config.cue_indent_min
        and len(cue_body.split()) <= 5
    ):
        return LineClass.CHARACTER_CUE

    in_dialogue_block = prev_class in (
        LineClass.CHARACTER_CUE, LineClass.DIALOGUE_LINE, LineClass.PARENTHETICAL,
    )
    if in_dialogue_block and trimmed.startswith("("):
        return LineClass.PARENTHETICAL
    if in_dialogue_block and indent >= config.dialogue_indent_min:
        return LineClass.DIALOGUE_LINE
    return LineClass.ACTION_LINE


_CLASS_TO_KIND = {
    LineClass.SLUGLINE: ElementKind.SLUGLINE,
    LineClass.ACTION_LINE: ElementKind.ACTION,
    LineClass.CHARACTER_CUE: ElementKind.CHARACTER_CUE,
    LineClass.DIALOGUE_LINE: ElementKind.DIALOGUE,
    LineClass.PARENTHETICAL: ElementKind.DIALOGUE,
}


@dataclass
class ScriptParse:
    """Parse output: the structured script plus parse-time warnings."""

    script: Script
    warnings: list[Issue] = field(default_factory=list)
    line_classes: list[LineClass] = field(default_factory=list)


def parse_script(text: str, config: LayoutConfig = DEFAULT_LAYOUT, title: str = "") -> ScriptParse:
    """Classify lines, merge same-class runs into elements, and cut scenes at sluglines.

    Noise lines vanish without breaking an element run (page numbers and
    CONTINUED markers interrupt blocks mid-flow); blank lines end the current
    run, so action paragraphs stay separate elements.  A leading scene with no
    slugline gets a synthesized one and a warning.
    """
    normalized = text.replace("\r\n", "\n").replace("\r", "\n")
    lines = normalized.split("\n")
    if not any(line.strip() for line in lines):
        raise EmptyInputError("input has no non-blank lines")

    classes: list[LineClass] = []
    prev = LineClass.BLANK
    for line in lines:
        cls = classify_line(line, prev, config)
        classes.append(cls)
        prev = cls

    elements: list[ScreenplayElement] = []
    run_class: LineClass | None = None
    run_lines: list[str] = []
    run_start = 0
    run_end = 0

    def flush() -> None:
        nonlocal run_class, run_lines
        if run_class is None:
            return
        kind = _CLASS_TO_KIND[run_class]
        body = "\n".join(run_lines)
        if body.strip():
            elements.append(ScreenplayElement(kind=kind, text=body, line_span=(run_start, run_end)))
        run_class = None
        run_lines = []

    for idx, (line, cls) in enumerate(zip(lines, classes)):
        if cls is LineClass.BLANK:
            flush()
            continue
        if cls in (LineClass.NOISE, LineClass.TRANSITION):
            # noise is dropped mid-run; transitions are dropped but end the block
            if cls is LineClass.TRANSITION:
                flush()
            continue
        # parentheticals fold into the surrounding dialogue element
        effective = LineClass.DIALOGUE_LINE if cls is LineClass.PARENTHETICAL else cls
        if run_class == effective:
            run_lines.append(line.strip())
            run_end = idx + 1
        else:
            flush()
            run_class = effective
            run_lines = [line.strip()]
            run_start = idx
            run_end = idx + 1
    flush()

    if not elements:
        raise NoElementsError("every line classified as noise or blank")

    warnings: list[Issue] = []
    scenes: list[Scene] = []
    current: list[ScreenplayElement] = []
    for el in elements:
        if el.kind is ElementKind.SLUGLINE:
            if current:
                scenes.append(Scene(current))
            current = [el]
        else:
            if not current:
                current = [ScreenplayElement(kind=ElementKind.SLUGLINE, text=SYNTHESIZED_SLUGLINE)]
                warnings.append(issue(
                    "SynthesizedSlugline",
                    "leading content had no slugline; synthesized one",
                ))
            current.append(el)
    if current:
        scenes.append(Scene(current))

    return ScriptParse(script=Script(title=title, scenes=scenes), warnings=warnings, line_classes=classes)


# ---------------------------------------------------------------------------
# tagged wire format

_KIND_TO_TAGS = {
    ElementKind.SLUGLINE: ("<bsl>", "<esl>"),
    ElementKind.ACTION: ("<bal>", "<eal>"),
    ElementKind.CHARACTER_CUE: ("<bcn>", "<ecn>"),
    ElementKind.DIALOGUE: ("<bd>", "<ed>"),
}
_BEGIN_TO_KIND = {begin: kind for kind, (begin, _) in _KIND_TO_TAGS.items()}
_END_FOR_BEGIN = {begin: end for _, (begin, end) in _KIND_TO_TAGS.items()}
_ALL_TAGS = sorted(
    {tag for pair in _KIND_TO_TAGS.values() for tag in pair},
    key=len, reverse=True,
)
_TAG_RE = re.compile("|".join(re.escape(t) for t in _ALL_TAGS))


def encode_tagged(scene: Scene) -> str:
    """Serialize a scene to tagged text, one element per line.

    Internal element newlines collapse to single spaces: the tagged format is
    line-oriented and cannot carry them.
    """
    if not scene.elements:
        raise ValueError("cannot encode an empty scene")
    lines = []
    for el in scene.elements:
        tags = _KIND_TO_TAGS.get(el.kind)
        if tags is None:
            raise UnsupportedElementError(el.kind.value)
        begin, end = tags
        flat = " ".join(el.text.split())
        lines.append(f"{begin} {flat} {end}")
    return "\n".join(lines)


@dataclass
class DecodedScene:
    scene: Scene
    warnings: list[Issue] = field(default_factory=list)


def decode_tagged(text: str, strict: bool = False) -> DecodedScene:
    """Parse tagged text back into a scene.

    Lenient mode (the default, meant for model output) reports stray text and
    empty elements as warnings and keeps going; strict mode (dataset
    ingestion) raises on them.  Unbalanced or mismatched tags always raise.
    """
    warnings: list[Issue] = []

    def stray(snippet: str, offset: int) -> None:
        if strict:
            raise StrayTextError(snippet, offset)
        warnings.append(issue(
            "StrayText",
            f"text outside tags at byte offset {offset}: {snippet!r}",
            snippet=snippet, offset=offset,
        ))

    elements: list[ScreenplayElement] = []
    pos = 0
    open_tag: str | None = None
    open_at = 0
    body_start = 0
    for match in _TAG_RE.finditer(text):
        tag = match.group(0)
        if open_tag is None:
            between = text[pos:match.start()]
            if between.strip():
                stray(between.strip()[:40], pos + len(between) - len(between.lstrip()))
            if tag not in _BEGIN_TO_KIND:
                raise UnbalancedTagsError(f"end tag {tag} without a begin tag", match.start())
            open_tag = tag
            open_at = match.start()
            body_start = match.end()
        else:
            expected = _END_FOR_BEGIN[open_tag]
            if tag != expected:
                raise UnbalancedTagsError(
                    f"expected {expected} to close {open_tag}, found {tag}", match.start(),
                )
            body = text[body_start:match.start()].strip()
            if body:
                elements.append(ScreenplayElement(kind=_BEGIN_TO_KIND[open_tag], text=body))
            else:
                msg = f"empty element {open_tag}...{expected}"
                if strict:
                    raise EmptyElementError(msg, open_at)
                warnings.append(issue("EmptyElement", msg, offset=open_at))
            open_tag = None
        pos = match.end()
    if open_tag is not None:
        raise UnbalancedTagsError(f"begin tag {open_tag} never closed", open_at)
    tail = text[pos:]
    if tail.strip():
        stray(tail.strip()[:40], pos + len(tail) - len(tail.lstrip()))

    if not elements and not text.strip():
        warnings.append(issue("EmptyScene", "no tagged content"))

    scene = Scene(elements)
    for problem in scene.check():
        warnings.append(issue("OrphanDialogue", problem))
    return DecodedScene(scene=scene, warnings=warnings)


# ---------------------------------------------------------------------------
# rendering

def render_screenplay(scene: Scene, page_width: int = 60) -> str:
    """Render a scene with screenplay typography.

    Sluglines flush-left uppercased, action flush-left as written, cues
    centered and uppercased, dialogue wrapped into a centered block half the
    page wide, transitions flush-right.  Blocks are separated by blank lines
    except between a cue and its dialogue.
    """
    if page_width < 40:
        raise ValueError("page_width must be at least 40")
    if not scene.elements:
        return ""

    blocks: list[tuple[ElementKind, list[str]]] = []
    for el in scene.elements:
        if el.kind is ElementKind.SLUGLINE:
            lines = [" ".join(el.text.split()).upper()]
        elif el.kind is ElementKind.ACTION:
            lines = [line.strip() for line in el.text.split("\n")]
        elif el.kind is ElementKind.CHARACTER_CUE:
            cue = " ".join(el.text.split()).upper()
            lines = [" " * max(0, (page_width - len(cue)) // 2) + cue]
        elif el.kind is ElementKind.DIALOGUE:
            block_width = page_width // 2
            margin = (page_width - block_width) // 2
            flat = " ".join(el.text.split())
            wrapped = textwrap.wrap(flat, width=block_width) or [flat]
            lines = [" " * margin + line for line in wrapped]
        else:  # transition
            body = " ".join(el.text.split()).upper()
            lines = [" " * max(0, page_width - len(body)) + body]
        blocks.append((el.kind, lines))

    out: list[str] = []
    prev_kind: ElementKind | None = None
    for kind, lines in blocks:
        attached_dialogue = kind is ElementKind.DIALOGUE and prev_kind is ElementKind.CHARACTER_CUE
        if out and not attached_dialogue:
            out.append("")
        out.extend(lines)
        prev_kind = kind
    return "\n".join(out)


def normalized_scene(scene: Scene) -> Scene:
    """The scene with element texts whitespace-collapsed; the tagged format's view of it."""
    return Scene(
        elements=[replace(el, text=" ".join(el.text.split())) for el in scene.elements],
        description=scene.description,
    )
