"""Central finite-difference audit of analytic gradients, per parameter group."""
import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np
import torch

logger = logging.getLogger(__name__)

NamedParameters = Sequence[Tuple[str, torch.nn.Parameter]]


@dataclass(frozen=True)
class GradCheckResult:
    group: str
    coordinates: int
    analytic_norm: float
    numeric_norm: float
    abs_error: float
    rel_error: float

    def passed(self, rel_tol: float = 1e-4) -> bool:
        return self.rel_error <= rel_tol


def _coordinates(grad: torch.Tensor, count: int, rng: np.random.Generator) -> List[int]:
    size = grad.numel()
    picked = {int(grad.abs().flatten().argmax())}
    if size > 1:
        picked.update(int(i) for i in rng.choice(size, size=min(count, size), replace=False))
    return sorted(picked)


def finite_difference_check(
    loss_fn: Callable[[], torch.Tensor],
    groups: Dict[str, NamedParameters],
    delta: float = 1e-6,
    coords_per_tensor: int = 3,
    seed: int = 0,
) -> Dict[str, GradCheckResult]:
    """Compare autograd gradients of ``loss_fn`` with central differences.

    ``loss_fn`` must be deterministic (fixed t, noise and drop mask). For every
    tensor the largest-gradient coordinate plus ``coords_per_tensor`` random
    ones are perturbed by +/- ``delta``. Run in float64.
    """
    parameters = [p for named in groups.values() for _, p in named]
    for parameter in parameters:
        parameter.grad = None
    loss_fn().backward()

    rng = np.random.default_rng(seed)
    results: Dict[str, GradCheckResult] = {}
    with torch.no_grad():
        for group, named in groups.items():
            analytic: List[float] = []
            numeric: List[float] = []
            for name, parameter in named:
                grad = parameter.grad if parameter.grad is not None else torch.zeros_like(parameter)
                flat = parameter.view(-1)
                for index in _coordinates(grad, coords_per_tensor, rng):
                    original = flat[index].item()
                    flat[index] = original + delta
                    upper = float(loss_fn())
                    flat[index] = original - delta
                    lower = float(loss_fn())
                    flat[index] = original
                    analytic.append(float(grad.view(-1)[index]))
                    numeric.append((upper - lower) / (2.0 * delta))
            a = np.asarray(analytic)
            n = np.asarray(numeric)
            abs_error = float(np.linalg.norm(a - n))
            scale = float(np.linalg.norm(a) + np.linalg.norm(n))
            results[group] = GradCheckResult(
                group=group,
                coordinates=len(a),
                analytic_norm=float(np.linalg.norm(a)),
                numeric_norm=float(np.linalg.norm(n)),
                abs_error=abs_error,
                rel_error=abs_error / scale if scale > 0 else 0.0,
            )
            logger.debug(f"gradcheck {group}: {len(a)} coords, rel error {results[group].rel_error:.3e}")
    return results


__all__ = ["GradCheckResult", "finite_difference_check"]
