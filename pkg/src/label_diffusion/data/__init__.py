from .generator import Placement, generate_scene, generate_scenes, rasterize
from .grammar import COUNT_WORDS, SHAPE_NOUNS, STUFF_KINDS, UNK_TOKEN, grammar_tokens
from .manifest import (
    MANIFEST_NAME,
    ManifestEntry,
    PhraseEntry,
    SceneManifest,
    load_manifest,
    read_image_png,
    read_mask_png,
    write_image_png,
    write_manifest,
    write_mask_png,
)
from .splits import split_dataset, split_positions

__all__ = [
    "COUNT_WORDS",
    "MANIFEST_NAME",
    "ManifestEntry",
    "PhraseEntry",
    "Placement",
    "SHAPE_NOUNS",
    "STUFF_KINDS",
    "SceneManifest",
    "UNK_TOKEN",
    "generate_scene",
    "generate_scenes",
    "grammar_tokens",
    "load_manifest",
    "rasterize",
    "read_image_png",
    "read_mask_png",
    "split_dataset",
    "split_positions",
    "write_image_png",
    "write_manifest",
    "write_mask_png",
]
