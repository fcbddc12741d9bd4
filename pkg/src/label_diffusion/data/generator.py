"""
Synthetic scenes: colored shapes on a textured stuff background.

Each scene has one to a few thing groups (a color/shape pair drawn one to
three times) and one stuff region covering every pixel no shape covers.
Masks are rasterized with Pillow, so they are exact by construction.
"""
import logging
from dataclasses import dataclass
from typing import Iterator, List, Optional, Tuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from PIL import Image, ImageDraw, ImageFilter

from ..errors import GenerationError
from ..models.scene import Number, PhraseAnnotation, Scene, SceneSpec, ThingStuff
from .grammar import COUNT_WORDS, SHAPE_NOUNS, STUFF_KINDS

logger = logging.getLogger(__name__)

MIN_RADIUS_PX = 3
RADIUS_RANGE = (0.08, 0.17)
SMALL_BELOW = 0.11
LARGE_ABOVE = 0.14
MIN_STUFF_FRACTION = 0.10
SHAPE_AREA_BUDGET = 0.5
TEXTURE_SIGMA = 0.04


@dataclass(frozen=True)
class Placement:
    shape: str
    cx: int
    cy: int
    radius: int


def rasterize(placement: Placement, size: int) -> np.ndarray:
    canvas = Image.new("L", (size, size), 0)
    draw = ImageDraw.Draw(canvas)
    x, y, r = placement.cx, placement.cy, placement.radius
    if placement.shape == "circle":
        draw.ellipse((x - r, y - r, x + r, y + r), fill=255)
    elif placement.shape == "square":
        draw.rectangle((x - r, y - r, x + r, y + r), fill=255)
    else:
        draw.polygon([(x, y - r), (x - r, y + r), (x + r, y + r)], fill=255)
    return np.asarray(canvas) > 0


def _dilate(mask: np.ndarray) -> np.ndarray:
    image = Image.fromarray(mask.astype(np.uint8) * 255)
    return np.asarray(image.filter(ImageFilter.MaxFilter(3))) > 0


def _radius_bounds(spec: SceneSpec, n_shapes: int) -> Tuple[int, int]:
    """Radius range for a scene with ``n_shapes`` shapes; bounding boxes share a fixed area budget."""
    size = spec.image_size
    low, high = (max(MIN_RADIUS_PX, int(round(f * size))) for f in RADIUS_RANGE)
    box = np.sqrt(SHAPE_AREA_BUDGET * size * size / max(n_shapes, 1))
    return low, max(low, min(high, int((box - 1) // 2)))


def _free_centers(blocked: np.ndarray, radius: int) -> np.ndarray:
    """(cy, cx) centers whose whole bounding box avoids ``blocked``."""
    size = blocked.shape[0]
    k = 2 * radius + 1
    if k + 2 > size:
        return np.empty((0, 2), dtype=np.int64)
    hit = sliding_window_view(blocked, (k, k)).any(axis=(-2, -1))
    free = ~hit[1 : size - k, 1 : size - k]
    return np.argwhere(free) + 1 + radius


def _place(
    shape: str, occupied: np.ndarray, bounds: Tuple[int, int], spec: SceneSpec, rng: np.random.Generator
) -> Optional[Tuple[Placement, np.ndarray]]:
    size = spec.image_size
    low, high = bounds
    blocked = _dilate(occupied)
    for attempt in range(spec.max_retries):
        # Crowded scenes fall back to smaller shapes.
        cap = high - (high - low) * attempt // spec.max_retries
        radius = int(rng.integers(low, cap + 1))
        if 2 * radius + 3 > size:
            continue
        cx = int(rng.integers(radius + 1, size - radius - 1))
        cy = int(rng.integers(radius + 1, size - radius - 1))
        placement = Placement(shape, cx, cy, radius)
        mask = rasterize(placement, size)
        if mask.any() and not (mask & blocked).any():
            return placement, mask
    centers = _free_centers(blocked, low)
    if not len(centers):
        return None
    cy, cx = (int(v) for v in centers[int(rng.integers(len(centers)))])
    placement = Placement(shape, cx, cy, low)
    mask = rasterize(placement, size)
    if not mask.any() or (mask & blocked).any():
        return None
    return placement, mask


def _size_word(placement: Placement, size: int) -> str:
    relative = placement.radius / size
    if relative < SMALL_BELOW:
        return "small"
    if relative > LARGE_ABOVE:
        return "large"
    return ""


def _location(placement: Placement, size: int) -> str:
    third = size / 3.0
    if placement.cx < third:
        return "on the left"
    if placement.cx >= 2 * third:
        return "on the right"
    if placement.cy < third:
        return "at the top"
    if placement.cy >= 2 * third:
        return "at the bottom"
    return "in the center"


def _thing_phrase(color: str, shape: str, placements: List[Placement], spec: SceneSpec) -> str:
    if len(placements) > 1:
        return f"{COUNT_WORDS[len(placements)]} {color} {SHAPE_NOUNS[shape]}"
    words = [_size_word(placements[0], spec.image_size), color, shape]
    if spec.spatial_words:
        words.append(_location(placements[0], spec.image_size))
    return " ".join(w for w in words if w)


def _texture(base: Tuple[float, float, float], size: int, rng: np.random.Generator) -> np.ndarray:
    noise = rng.normal(0.0, TEXTURE_SIGMA, size=(size, size, 1))
    return np.clip(np.asarray(base, dtype=np.float64)[None, None, :] + noise, 0.0, 1.0)


def generate_scene(seed: int, spec: SceneSpec = SceneSpec()) -> Scene:
    """Deterministic scene for ``seed``; pixel values are 8-bit levels in [0, 1]."""
    rng = np.random.default_rng(seed)
    size = spec.image_size

    stuff_noun = sorted(STUFF_KINDS)[int(rng.integers(len(STUFF_KINDS)))]
    stuff_adjective, stuff_rgb = STUFF_KINDS[stuff_noun]
    image = _texture(stuff_rgb, size, rng)

    colors = sorted(spec.palette)
    shapes = sorted(SHAPE_NOUNS)
    combos = [(c, s) for c in colors for s in shapes]
    n_groups = min(int(rng.integers(spec.min_groups, spec.max_groups + 1)), len(combos))
    chosen = rng.choice(len(combos), size=n_groups, replace=False)

    counts = [int(rng.integers(1, spec.max_instances + 1)) for _ in chosen]
    bounds = _radius_bounds(spec, sum(counts))

    occupied = np.zeros((size, size), dtype=bool)
    phrases: List[PhraseAnnotation] = []
    for combo_index, count in zip(chosen, counts):
        color, shape = combos[int(combo_index)]
        placements: List[Placement] = []
        group_mask = np.zeros_like(occupied)
        for _ in range(count):
            placed = _place(shape, occupied, bounds, spec, rng)
            if placed is None:
                logger.debug("Dropped a %s %s that no longer fits (seed=%d)", color, shape, seed)
                continue
            placement, mask = placed
            placements.append(placement)
            group_mask |= mask
            occupied |= mask
        if not placements:
            continue
        image[group_mask] = spec.palette[color]
        phrases.append(
            PhraseAnnotation(
                text=_thing_phrase(color, shape, placements, spec),
                mask=group_mask,
                thing_stuff=ThingStuff.THING,
                number=Number.PLURAL if len(placements) > 1 else Number.SINGULAR,
            )
        )

    if not phrases:
        raise GenerationError(
            f"Could not place any shape after {spec.max_retries} retries (seed={seed}, size={size})"
        )

    background = ~occupied
    if background.mean() < MIN_STUFF_FRACTION:
        raise GenerationError(f"Stuff region covers less than {MIN_STUFF_FRACTION:.0%} of the image (seed={seed})")
    phrases.append(
        PhraseAnnotation(
            text=f"{stuff_adjective} {stuff_noun}",
            mask=background.copy(),
            thing_stuff=ThingStuff.STUFF,
            number=Number.SINGULAR,
        )
    )
    image = (np.round(image * 255.0) / 255.0).astype(np.float32)
    return Scene(image=image, phrases=phrases, background_mask=background, seed=seed)


def generate_scenes(count: int, seed: int = 0, spec: SceneSpec = SceneSpec()) -> Iterator[Scene]:
    """Scenes for seeds ``seed, seed + 1, ...``."""
    for offset in range(count):
        yield generate_scene(seed + offset, spec)


__all__ = ["Placement", "generate_scene", "generate_scenes", "rasterize"]
