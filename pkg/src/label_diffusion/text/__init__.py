from .conditioning import (
    ADAPTER_SCALES,
    AdapterStack,
    PhraseConditioning,
    PhraseEncoder,
    apply_drop_mask,
    conditional_dropout,
    embed_phrase,
    null_conditioning,
    project_adapters,
)
from .vocabulary import PhraseVocabulary

__all__ = [
    "ADAPTER_SCALES",
    "AdapterStack",
    "PhraseConditioning",
    "PhraseEncoder",
    "PhraseVocabulary",
    "apply_drop_mask",
    "conditional_dropout",
    "embed_phrase",
    "null_conditioning",
    "project_adapters",
]
