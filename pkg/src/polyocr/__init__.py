"""Post-processing and evaluation of OCR output for polytonic Greek commentaries."""

__version__ = "0.1.0"

from .docmodel import (  # noqa: E402
    BBox,
    Line,
    Page,
    Region,
    RegionGroup,
    Taxonomy,
    Word,
    assign_regions,
    parse_hocr,
    parse_region_annotations,
    read_canonical,
    region_group_of,
    write_canonical,
)
from .evaluate import (  # noqa: E402
    aggregate_weighted,
    align_words,
    bag_of_words_f1,
    corpus_stats,
    evaluate_page,
    levenshtein,
    nld_from_cer,
    pool,
    region_cer,
    wer,
)
from .lexicon import (  # noqa: E402
    Lexicon,
    UniqueAccentIndex,
    build_unique_accent_index,
    dictionary_accuracy,
    load_wordlist,
)
from .polytonic import (  # noqa: E402
    DiacriticProfile,
    Script,
    decompose,
    greek_ratio,
    normalize_nfc,
    script_of,
    strip_diacritics,
)
from .postprocess import (  # noqa: E402
    ConfusionPairTable,
    CorrectionLog,
    PipelineConfig,
    dehyphenate,
    is_marginal_number,
    run_pipeline,
    spellcheck_confusion,
    spellcheck_unique_accent,
)
