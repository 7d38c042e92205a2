"""Generate the bundled parser corpus and its golden parse snapshot.

Run from the repository root:

    python3 tools/make_corpus.py

Writes tests/data/corpus/script_NN.txt and tests/data/corpus_golden.json.
Both are committed; the test suite reads them and never regenerates, so the
random module's cross-version stability is irrelevant.
"""

import random
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))

from helpers import corpus_golden_bytes, corpus_snapshot  # noqa: E402

SEED = 2026
N_SCRIPTS = 6
CUE_INDENT = " " * 24
DLG_INDENT = " " * 10

NOUNS = [
    "rain", "window", "ledger", "lantern", "harbor", "stairwell", "engine",
    "letter", "radio", "mirror", "kettle", "bridge", "notebook", "coat",
    "candle", "tide", "signal", "garden", "corridor", "photograph",
]
VERBS = [
    "flickers", "settles", "drifts", "hums", "creaks", "waits", "burns",
    "trembles", "fades", "turns", "rattles", "glows", "spills", "stalls",
]
OPENERS = [
    "The", "A", "Another", "Her", "His", "Their", "One", "Every",
]
TAILS = [
    "in the half light", "by the far wall", "against the glass",
    "under the low ceiling", "near the door", "beyond the fence",
    "at the edge of the frame", "through the smoke", "on the worn table",
]
DIALOGUE_BITS = [
    "You said you would wait for me",
    "That was a long time ago",
    "Nobody locks that door anymore",
    "I read the letter twice",
    "We leave before the tide turns",
    "You never asked what it cost",
    "It was always about the money",
    "Say that again, slowly",
    "The engine will hold if we are careful",
    "I kept the photograph anyway",
    "There is still time to turn around",
    "You knew the whole winter, didn't you",
]
NAMES = [
    "MARA", "JONAH", "EDDA", "NILS", "CAPTAIN REY", "DR. SALK", "THE CLERK",
    "ODESSA", "BRANNOCK", "LENA", "FATHER OKAFOR", "TILLY",
]
EXTENSIONS = ["(V.O.)", "(O.S.)", "(CONT'D)"]
PARENTHETICALS = [
    "(quietly)", "(beat)", "(almost laughing)", "(reading)", "(to herself)",
    "(a long pause)", "(overlapping)",
]
LOCATIONS = [
    "KITCHEN", "GARDEN", "LIGHTHOUSE GALLERY", "TRAIN PLATFORM", "ARCHIVE ROOM",
    "FISH MARKET", "STAIRWELL", "RADIO SHACK", "FERRY DECK", "GREENHOUSE",
    "BACK OFFICE", "CANAL BANK", "HOTEL LOBBY", "WORKSHOP", "CHAPEL",
]
PREFIXES = ["INT.", "EXT.", "INT./EXT."]
TIMES = ["DAY", "NIGHT", "DAWN", "DUSK", "LATER", "CONTINUOUS"]
TRANSITIONS = ["CUT TO:", "DISSOLVE TO:", "SMASH CUT TO:", "MATCH CUT TO:"]


def sentence(rng):
    return " ".join([
        rng.choice(OPENERS), rng.choice(NOUNS), rng.choice(VERBS),
        rng.choice(TAILS),
    ]) + "."


def noise_line(rng):
    roll = rng.random()
    if roll < 0.4:
        return f"{rng.randint(2, 140)}."
    if roll < 0.6:
        return f"-{rng.randint(2, 140)}-"
    if roll < 0.8:
        return "(CONTINUED)"
    return "CONTINUED:"


def action_block(rng):
    lines = [sentence(rng) for _ in range(rng.randint(1, 3))]
    if len(lines) >= 2 and rng.random() < 0.15:
        # interior noise merges the surrounding action lines into one element
        lines.insert(rng.randint(1, len(lines) - 1), noise_line(rng))
    return lines


def dialogue_block(rng):
    cue = rng.choice(NAMES)
    if rng.random() < 0.25:
        cue += " " + rng.choice(EXTENSIONS)
    lines = [CUE_INDENT + cue]
    if rng.random() < 0.3:
        lines.append(DLG_INDENT + rng.choice(PARENTHETICALS))
    for bit in rng.sample(DIALOGUE_BITS, rng.randint(1, 3)):
        lines.append(DLG_INDENT + bit + rng.choice([".", ".", "?", "!"]))
        if rng.random() < 0.1:
            lines.append(DLG_INDENT + rng.choice(PARENTHETICALS))
    return lines


def scene_lines(rng, first):
    lines = []
    if not first:
        if rng.random() < 0.2:
            lines += [rng.choice(TRANSITIONS), ""]
        if rng.random() < 0.15:
            lines += [noise_line(rng), ""]
    prefix = rng.choice(PREFIXES)
    lines.append(f"{prefix} {rng.choice(LOCATIONS)} - {rng.choice(TIMES)}")
    lines.append("")
    for _ in range(rng.randint(2, 4)):
        block = action_block(rng) if rng.random() < 0.55 else dialogue_block(rng)
        lines += block
        lines.append("")
        if rng.random() < 0.1:
            lines.append("")
    return lines


def build_script(rng):
    lines = []
    n_scenes = rng.randint(18, 24)
    for index in range(n_scenes):
        lines += scene_lines(rng, first=index == 0)
    if rng.random() < 0.5:
        lines.append("FADE OUT.")
    while lines and not lines[-1]:
        lines.pop()
    return "\n".join(lines) + "\n", n_scenes


def main():
    rng = random.Random(SEED)
    corpus_dir = ROOT / "tests" / "data" / "corpus"
    corpus_dir.mkdir(parents=True, exist_ok=True)
    texts = {}
    for i in range(1, N_SCRIPTS + 1):
        name = f"script_{i:02d}.txt"
        text, n_scenes = build_script(rng)
        (corpus_dir / name).write_text(text, encoding="utf-8")
        texts[name] = text
        print(f"{name}: {n_scenes} scenes, {len(text.splitlines())} lines")

    files = corpus_snapshot(texts)
    total_scenes = sum(entry["scene_count"] for entry in files.values())
    for name, entry in files.items():
        assert entry["scene_count"] == entry["slugline_lines"], name
        assert entry["warnings"] == [], name
        # the parser sees text.split("\n"), so a trailing newline adds a line
        assert len(entry["line_classes"]) == len(texts[name].split("\n")), name
    assert len(files) >= 5 and total_scenes >= 100, (len(files), total_scenes)

    golden = ROOT / "tests" / "data" / "corpus_golden.json"
    golden.write_bytes(corpus_golden_bytes(files))
    print(f"total: {total_scenes} scenes across {len(files)} scripts")
    print(f"golden: {golden} ({golden.stat().st_size} bytes)")


if __name__ == "__main__":
    main()
