"""Generate the committed fine-tune export goldens, one file per profile.

Run from the repository root:

    python3 tools/make_export_goldens.py

Writes tests/data/export_{O,AS,AL,ASG,ALG}.jsonl from the deterministic
20-record fixture dataset.  The files are committed; the acceptance suite
re-exports the same fixture and compares bytes.
"""

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))

from helpers import fixture_dataset  # noqa: E402

from kurosawa.dataset import export_finetune, write_finetune_jsonl  # noqa: E402
from kurosawa.plots import GenerationProfile  # noqa: E402


def main():
    out_dir = ROOT / "tests" / "data"
    out_dir.mkdir(parents=True, exist_ok=True)
    for profile in GenerationProfile:
        path = out_dir / f"export_{profile.value}.jsonl"
        first = export_finetune(fixture_dataset(), profile)
        again = export_finetune(fixture_dataset(), profile)
        assert first == again, profile
        write_finetune_jsonl(first, path)
        print(f"{path.name}: {len(first)} records, {path.stat().st_size} bytes")


if __name__ == "__main__":
    main()
