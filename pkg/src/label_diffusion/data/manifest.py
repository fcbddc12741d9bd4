"""
On-disk dataset layout.

    <dir>/manifest.jsonl    header line, then one JSON record per scene
    <dir>/images/NNNN.png   RGB, 8 bits per channel
    <dir>/masks/NNNN_k.png  phrase k of scene NNNN, grayscale {0, 255}
    <dir>/masks/NNNN_bg.png background region

Loading parses the small JSON records up front and reads PNGs only when a
scene is requested, so iterating a manifest holds one scene at a time.
"""
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, List, Sequence, Union

import numpy as np
from PIL import Image

from ..errors import DataError, ManifestError
from ..models.scene import Number, PhraseAnnotation, Scene, ThingStuff
from ..versioning import MANIFEST_FORMAT_VERSION, check_format_version

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.jsonl"


def write_mask_png(mask: np.ndarray, path: Union[str, Path]) -> None:
    Image.fromarray(np.asarray(mask, dtype=np.uint8) * 255).save(path)


def read_mask_png(path: Union[str, Path]) -> np.ndarray:
    with Image.open(path) as image:
        return np.asarray(image.convert("L")) > 127


def write_image_png(image: np.ndarray, path: Union[str, Path]) -> None:
    pixels = np.clip(np.round(np.asarray(image) * 255.0), 0, 255).astype(np.uint8)
    Image.fromarray(pixels).save(path)


def read_image_png(path: Union[str, Path]) -> np.ndarray:
    with Image.open(path) as image:
        return np.asarray(image.convert("RGB"), dtype=np.float32) / 255.0


@dataclass(frozen=True)
class PhraseEntry:
    text: str
    mask: str
    thing_stuff: ThingStuff
    number: Number


@dataclass(frozen=True)
class ManifestEntry:
    index: int
    seed: int
    image: str
    background: str
    phrases: List[PhraseEntry]
    line: int


@dataclass
class SceneManifest:
    directory: Path
    entries: List[ManifestEntry] = field(default_factory=list)
    format_version: str = MANIFEST_FORMAT_VERSION

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[Scene]:
        for entry in self.entries:
            yield self.load_scene(entry)

    def _where(self, entry: ManifestEntry) -> str:
        return f"{self.directory / MANIFEST_NAME}:{entry.line} (scene {entry.index})"

    def _file(self, entry: ManifestEntry, relative: str) -> Path:
        path = self.directory / relative
        if not path.is_file():
            raise ManifestError(f"{self._where(entry)}: missing file {path}")
        return path

    def load_scene(self, entry: ManifestEntry) -> Scene:
        image = read_image_png(self._file(entry, entry.image))
        background = read_mask_png(self._file(entry, entry.background))
        phrases = [
            PhraseAnnotation(p.text, read_mask_png(self._file(entry, p.mask)), p.thing_stuff, p.number)
            for p in entry.phrases
        ]
        for phrase in phrases:
            if phrase.mask.shape != image.shape[:2]:
                raise ManifestError(f"{self._where(entry)}: mask size {phrase.mask.shape} differs from image")
        return Scene(image=image, phrases=phrases, background_mask=background, seed=entry.seed)

    def subset(self, positions: Sequence[int]) -> "SceneManifest":
        return SceneManifest(self.directory, [self.entries[i] for i in positions], self.format_version)

    @property
    def phrase_count(self) -> int:
        return sum(len(entry.phrases) for entry in self.entries)


def write_manifest(scenes: Iterable[Scene], directory: Union[str, Path]) -> SceneManifest:
    directory = Path(directory)
    try:
        (directory / "images").mkdir(parents=True, exist_ok=True)
        (directory / "masks").mkdir(parents=True, exist_ok=True)
        manifest = SceneManifest(directory)
        with (directory / MANIFEST_NAME).open("w", encoding="utf-8", newline="\n") as handle:
            handle.write(json.dumps({"format_version": MANIFEST_FORMAT_VERSION}) + "\n")
            for index, scene in enumerate(scenes):
                stem = f"{index:04d}"
                image = f"images/{stem}.png"
                background = f"masks/{stem}_bg.png"
                write_image_png(scene.image, directory / image)
                write_mask_png(scene.background_mask, directory / background)
                phrases = []
                for k, phrase in enumerate(scene.phrases):
                    mask = f"masks/{stem}_{k}.png"
                    write_mask_png(phrase.mask, directory / mask)
                    phrases.append(PhraseEntry(phrase.text, mask, phrase.thing_stuff, phrase.number))
                record = {
                    "index": index,
                    "seed": scene.seed,
                    "image": image,
                    "background": background,
                    "phrases": [
                        {"text": p.text, "mask": p.mask, "thing_stuff": p.thing_stuff.value, "number": p.number.value}
                        for p in phrases
                    ],
                }
                handle.write(json.dumps(record, ensure_ascii=False) + "\n")
                manifest.entries.append(ManifestEntry(index, scene.seed, image, background, phrases, index + 2))
    except OSError as e:
        raise DataError(f"Cannot write dataset to {directory}: {e}") from e
    logger.info(f"Wrote {len(manifest)} scenes to {directory}")
    return manifest


def _parse_entry(record: dict, line: int, source: Path) -> ManifestEntry:
    where = f"{source}:{line}"
    try:
        phrases = []
        for p in record["phrases"]:
            try:
                thing_stuff = ThingStuff(p["thing_stuff"])
                number = Number(p["number"])
            except ValueError as e:
                raise ManifestError(f"{where} (scene {record.get('index')}): bad tag: {e}") from None
            phrases.append(PhraseEntry(str(p["text"]), str(p["mask"]), thing_stuff, number))
        return ManifestEntry(
            int(record["index"]), int(record["seed"]), str(record["image"]), str(record["background"]), phrases, line
        )
    except (KeyError, TypeError) as e:
        raise ManifestError(f"{where}: malformed entry, missing or invalid field {e}") from None


def load_manifest(directory: Union[str, Path]) -> SceneManifest:
    directory = Path(directory)
    source = directory / MANIFEST_NAME
    if not source.is_file():
        raise ManifestError(f"No dataset manifest at {source}")
    manifest = SceneManifest(directory)
    with source.open("r", encoding="utf-8") as handle:
        for line_no, text in enumerate(handle, start=1):
            if not text.strip():
                continue
            try:
                record = json.loads(text)
            except json.JSONDecodeError as e:
                raise ManifestError(f"{source}:{line_no}: invalid JSON ({e})") from None
            if line_no == 1:
                found = record.get("format_version") if isinstance(record, dict) else None
                check_format_version(found, MANIFEST_FORMAT_VERSION, str(source), ManifestError)
                manifest.format_version = found
                continue
            manifest.entries.append(_parse_entry(record, line_no, source))
    logger.info(f"Loaded manifest with {len(manifest)} scenes from {directory}")
    return manifest


__all__ = [
    "MANIFEST_NAME",
    "ManifestEntry",
    "PhraseEntry",
    "SceneManifest",
    "load_manifest",
    "read_image_png",
    "read_mask_png",
    "write_image_png",
    "write_manifest",
    "write_mask_png",
]
