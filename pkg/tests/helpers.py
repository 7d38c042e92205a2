"""Seeded fuzz factories and the deterministic fixture dataset.

Shared between the unit suites and the acceptance suite so every randomized
case stays reproducible from one integer seed.
"""

import json

from kurosawa.dataset import Dataset, DatasetRecord, RecordKind
from kurosawa.model import ElementKind, Scene, ScreenplayElement
from kurosawa.plots import ACT_TAGS, ActBoundaries
from kurosawa.screenplay import LineClass, parse_script

WORD_CHARS = "abcdefghijklmnopqrstuvwxyz"

TAGGABLE_KINDS = (
    ElementKind.SLUGLINE,
    ElementKind.ACTION,
    ElementKind.CHARACTER_CUE,
    ElementKind.DIALOGUE,
)


def random_word(rng, min_len=1, max_len=9):
    length = rng.randint(min_len, max_len)
    word = "".join(rng.choice(WORD_CHARS) for _ in range(length))
    if rng.random() < 0.12:
        word += rng.choice(".,!?;")
    if rng.random() < 0.05:
        word = word.capitalize()
    return word


def random_flat_text(rng, min_words=1, max_words=12):
    return " ".join(random_word(rng) for _ in range(rng.randint(min_words, max_words)))


def random_scene(rng, max_elements=12):
    """Scenes whose element texts are already whitespace-flat."""
    elements = []
    for _ in range(rng.randint(1, max_elements)):
        kind = TAGGABLE_KINDS[rng.randrange(len(TAGGABLE_KINDS))]
        elements.append(ScreenplayElement(kind=kind, text=random_flat_text(rng)))
    return Scene(elements)


def random_messy_scene(rng, max_elements=8):
    """Scenes with internal whitespace runs, for normalization round-trips."""
    elements = []
    for _ in range(rng.randint(1, max_elements)):
        words = [random_word(rng) for _ in range(rng.randint(1, 8))]
        text = words[0]
        for word in words[1:]:
            text += rng.choice([" ", "  ", "\n", " \n  "]) + word
        kind = TAGGABLE_KINDS[rng.randrange(len(TAGGABLE_KINDS))]
        elements.append(ScreenplayElement(kind=kind, text=text))
    return Scene(elements)


def random_plot_and_boundaries(rng, min_words=8, max_words=120):
    """A flat plot, valid word-gap boundaries, and the four expected act bodies."""
    words = [random_word(rng) for _ in range(rng.randint(min_words, max_words))]
    plot = " ".join(words)
    gaps = sorted(rng.sample(range(1, len(words)), 3))
    offsets = tuple(len(" ".join(words[:gap])) for gap in gaps)
    groups = (
        " ".join(words[: gaps[0]]),
        " ".join(words[gaps[0]: gaps[1]]),
        " ".join(words[gaps[1]: gaps[2]]),
        " ".join(words[gaps[2]:]),
    )
    return plot, ActBoundaries(ends=offsets), groups


def random_token_doc(rng, max_tokens=50, vocab="abcdef"):
    """Token sequences over a tiny vocabulary so n-grams actually collide."""
    return [rng.choice(vocab) for _ in range(rng.randint(0, max_tokens))]


# ---------------------------------------------------------------------------
# deterministic fixture dataset (no RNG: bytes must never drift)

def _sentence(prefix, index, n_words):
    return " ".join(f"{prefix}{index}w{j}" for j in range(n_words))


def _plot_target(index):
    parts = []
    for act_index, tag in enumerate(ACT_TAGS):
        parts.append(_sentence(f"act{act_index}n", index, 12) + " " + tag)
    return " ".join(parts)


def _scene_target(index):
    return "\n".join([
        f"<bsl> INT. SET {index} - DAY <esl>",
        f"<bal> {_sentence('move', index, 10)} <eal>",
        "<bcn> RILEY <ecn>",
        f"<bd> {_sentence('say', index, 8)} <ed>",
    ])


FIXTURE_GENRES = (
    ("Drama",),
    ("Comedy", "Romance"),
    ("Thriller",),
    ("Drama", "Mystery"),
    ("Action",),
)


# ---------------------------------------------------------------------------
# corpus golden snapshot (shared with tools/make_corpus.py)

def corpus_snapshot(texts):
    """Parse every corpus file into the structure frozen in the golden."""
    files = {}
    for name in sorted(texts):
        parse = parse_script(texts[name], title=name.rsplit(".", 1)[0])
        files[name] = {
            "scene_count": len(parse.script.scenes),
            "slugline_lines": sum(
                1 for c in parse.line_classes if c is LineClass.SLUGLINE),
            "line_classes": [c.value for c in parse.line_classes],
            "warnings": [w.to_dict() for w in parse.warnings],
            "script": parse.script.to_dict(),
        }
    return files


def corpus_golden_bytes(files):
    text = json.dumps({"files": files}, indent=2, sort_keys=True, ensure_ascii=False)
    return (text + "\n").encode("utf-8")


def fixture_dataset():
    """20 records (10 plot, 10 scene), identical bytes on every build."""
    dataset = Dataset(name="fixture-20")
    for i in range(10):
        dataset.add(DatasetRecord(
            id=f"plot-{i:03d}",
            kind=RecordKind.PLOT,
            storyline=_sentence("story", i, 20),
            long_storyline=_sentence("expanded", i, 60),
            genres=FIXTURE_GENRES[i % len(FIXTURE_GENRES)],
            target_text=_plot_target(i),
        ))
    for i in range(10):
        dataset.add(DatasetRecord(
            id=f"scene-{i:03d}",
            kind=RecordKind.SCENE,
            storyline=_sentence("desc", i, 20),
            long_storyline=_sentence("context", i, 60),
            genres=FIXTURE_GENRES[(i + 2) % len(FIXTURE_GENRES)],
            target_text=_scene_target(i),
        ))
    return dataset
