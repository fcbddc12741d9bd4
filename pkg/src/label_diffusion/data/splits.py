from typing import List, Sequence, Tuple, TypeVar, Union

import numpy as np

from ..errors import ParameterError
from .manifest import SceneManifest

T = TypeVar("T")


def split_positions(count: int, train_frac: float, seed: int) -> Tuple[List[int], List[int]]:
    """Seeded disjoint split of ``range(count)``; each side keeps ascending order."""
    if not 0.0 < train_frac < 1.0:
        raise ParameterError(f"train_frac must lie in (0, 1), got {train_frac}")
    n_train = int(round(count * train_frac))
    if n_train == 0 or n_train == count:
        raise ParameterError(f"Splitting {count} scenes at {train_frac} leaves an empty side")
    order = np.random.default_rng(seed).permutation(count)
    return sorted(int(i) for i in order[:n_train]), sorted(int(i) for i in order[n_train:])


def split_dataset(
    manifest: Union[SceneManifest, Sequence[T]],
    train_frac: float,
    seed: int,
) -> Tuple[Union[SceneManifest, List[T]], Union[SceneManifest, List[T]]]:
    train, test = split_positions(len(manifest), train_frac, seed)
    if isinstance(manifest, SceneManifest):
        return manifest.subset(train), manifest.subset(test)
    return [manifest[i] for i in train], [manifest[i] for i in test]


__all__ = ["split_dataset", "split_positions"]
