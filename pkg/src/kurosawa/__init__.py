"""Scriptwriter's workbench: storyline to plot to screenplay scene.

The library covers screenplay parsing and the tagged wire format, four-act
plot annotation, dataset assembly and fine-tune export, generation over a
pluggable completion backend, and an evaluation suite (automatic metrics plus
Likert rating summaries).  The same package ships a CLI (``kurosawa``) and an
HTTP service (``kurosawa serve``).
"""

from .dataset import (
    Dataset,
    DatasetRecord,
    FinetuneFormat,
    FinetuneRecord,
    RecordKind,
    export_finetune,
    genre_distribution,
    import_corpus,
    load_dataset,
    save_dataset,
    split_dataset,
    write_finetune_jsonl,
)
from .errors import Issue, KurosawaError, ValidationReport
from .generation import (
    CompletionBackend,
    GenerationConfig,
    GenerationResult,
    HttpBackend,
    MockBackend,
    complete,
    generate_plot,
    generate_scene,
    mock_complete,
)
from .metrics import (
    LikertRating,
    LikertSummary,
    MetricReport,
    bleu_n,
    distinct_n,
    likert_summary,
    metric_report,
    perplexity,
    repetition_n,
    rouge_l,
)
from .model import (
    ACT_NAMES,
    DEFAULT_GENRES,
    ElementKind,
    PlotActs,
    Scene,
    ScreenplayElement,
    Script,
    canonical_genre,
    tokenize,
    word_count,
)
from .plots import (
    ACT_TAGS,
    PROMPT_SEPARATOR,
    STOP_SEQUENCE,
    ActBoundaries,
    GenerationProfile,
    annotate_acts,
    build_prompt,
    insert_act_tags,
    parse_acts,
    strip_act_tags,
    validate_annotated_plot,
)
from .screenplay import (
    LayoutConfig,
    classify_line,
    decode_tagged,
    encode_tagged,
    parse_script,
    render_screenplay,
)

__version__ = "0.1.0"

__all__ = [
    "ACT_NAMES",
    "ACT_TAGS",
    "ActBoundaries",
    "CompletionBackend",
    "DEFAULT_GENRES",
    "Dataset",
    "DatasetRecord",
    "ElementKind",
    "FinetuneFormat",
    "FinetuneRecord",
    "GenerationConfig",
    "GenerationProfile",
    "GenerationResult",
    "HttpBackend",
    "Issue",
    "KurosawaError",
    "LayoutConfig",
    "LikertRating",
    "LikertSummary",
    "MetricReport",
    "MockBackend",
    "PROMPT_SEPARATOR",
    "PlotActs",
    "RecordKind",
    "STOP_SEQUENCE",
    "Scene",
    "ScreenplayElement",
    "Script",
    "ValidationReport",
    "annotate_acts",
    "bleu_n",
    "build_prompt",
    "canonical_genre",
    "classify_line",
    "complete",
    "decode_tagged",
    "distinct_n",
    "encode_tagged",
    "export_finetune",
    "generate_plot",
    "generate_scene",
    "genre_distribution",
    "import_corpus",
    "insert_act_tags",
    "likert_summary",
    "load_dataset",
    "metric_report",
    "mock_complete",
    "parse_acts",
    "parse_script",
    "perplexity",
    "render_screenplay",
    "repetition_n",
    "rouge_l",
    "save_dataset",
    "split_dataset",
    "strip_act_tags",
    "tokenize",
    "validate_annotated_plot",
    "word_count",
    "write_finetune_jsonl",
]
