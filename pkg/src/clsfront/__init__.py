"""Zero-shot TTS front end for Indian languages.

Indic-script text becomes extended CLS phone labels, then the target
language's phonotactic rules are applied regardless of the script it is
written in. Also ranks candidate synthesizers and scores audio with
mel-cepstral distortion.
"""

from .cls_core import Inventory, Phone, default_inventory, fallback, lookup, validate_inventory
from .config import RunConfig, load_profile
from .mcd_eval import dtw, load_pcm_wav, mcd_score, mel_cepstra
from .phonotactics import (
    Family,
    LanguageProfile,
    apply_rules,
    epenthesis,
    parse_text,
    schwa_delete,
    visarga_rules,
)
from .script_reader import ClsSequence, Script, normalize_text, segment_aksharas, word_to_raw_cls
from .selector import coverage, rank

__version__ = "0.1.0"
