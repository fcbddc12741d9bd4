"""Token-level adapter injection into self-attention, and text cross-attention."""
import math
from typing import Optional

import torch
from torch import nn

from ..errors import ShapeError


def _split_heads(x: torch.Tensor, heads: int) -> torch.Tensor:
    batch, tokens, width = x.shape
    return x.view(batch, tokens, heads, width // heads).transpose(1, 2)


def _merge_heads(x: torch.Tensor) -> torch.Tensor:
    batch, heads, tokens, head_width = x.shape
    return x.transpose(1, 2).reshape(batch, tokens, heads * head_width)


def _attend(q: torch.Tensor, k: torch.Tensor, v: torch.Tensor, heads: int) -> torch.Tensor:
    q, k, v = (_split_heads(x, heads) for x in (q, k, v))
    scores = q @ k.transpose(-1, -2) / math.sqrt(q.shape[-1])
    return _merge_heads(scores.softmax(dim=-1) @ v)


class InjectedSelfAttention(nn.Module):
    """W^Q, W^K, W^V, W^O shared by image tokens and injected adapter tokens."""

    def __init__(self, width: int, heads: int = 1):
        super().__init__()
        self.width = width
        self.heads = heads
        self.to_q = nn.Linear(width, width, bias=False)
        self.to_k = nn.Linear(width, width, bias=False)
        self.to_v = nn.Linear(width, width, bias=False)
        self.to_out = nn.Linear(width, width, bias=False)


def injected_self_attention(
    x: torch.Tensor,
    adapter_tokens: Optional[torch.Tensor],
    weights: InjectedSelfAttention,
) -> torch.Tensor:
    """Self-attention over concat(X, adapter tokens), keeping only the N image rows.

    ``x`` is (B, N, C) and ``adapter_tokens`` (B, M, C) or None for M = 0.
    """
    if x.shape[-1] != weights.width:
        raise ShapeError(f"Token width {x.shape[-1]} does not match attention width {weights.width}")
    n_tokens = x.shape[1]
    if adapter_tokens is not None and adapter_tokens.shape[1] > 0:
        if adapter_tokens.shape[-1] != x.shape[-1] or adapter_tokens.shape[0] != x.shape[0]:
            raise ShapeError(
                f"Adapter tokens {tuple(adapter_tokens.shape)} incompatible with image tokens {tuple(x.shape)}"
            )
        joint = torch.cat([x, adapter_tokens.to(x.dtype)], dim=1)
    else:
        joint = x
    z = weights.to_out(_attend(weights.to_q(joint), weights.to_k(joint), weights.to_v(joint), weights.heads))
    # Outputs at the adapter positions are discarded.
    return z[:, :n_tokens]


class CrossAttention(nn.Module):
    def __init__(self, width: int, context_dim: int, heads: int = 1):
        super().__init__()
        self.width = width
        self.context_dim = context_dim
        self.heads = heads
        self.to_q = nn.Linear(width, width, bias=False)
        self.to_k = nn.Linear(context_dim, width, bias=False)
        self.to_v = nn.Linear(context_dim, width, bias=False)
        self.to_out = nn.Linear(width, width, bias=False)


def cross_attention(
    x: torch.Tensor,
    context: torch.Tensor,
    weights: CrossAttention,
    normalized: Optional[torch.Tensor] = None,
) -> torch.Tensor:
    """Queries from X (or its normalized form), keys/values from the text; residual onto X.

    ``context`` is the (B, D_txt) global embedding, used as a single key/value
    token, or a (B, L, D_txt) token sequence.
    """
    if context.ndim == 2:
        context = context.unsqueeze(1)
    if context.shape[-1] != weights.context_dim:
        raise ShapeError(f"Context width {context.shape[-1]} does not match {weights.context_dim}")
    if x.shape[-1] != weights.width or context.shape[0] != x.shape[0]:
        raise ShapeError(f"Cross-attention inputs {tuple(x.shape)} and {tuple(context.shape)} do not align")
    queries = weights.to_q(x if normalized is None else normalized)
    context = context.to(x.dtype)
    attended = _attend(queries, weights.to_k(context), weights.to_v(context), weights.heads)
    return x + weights.to_out(attended)


def attention_probabilities(x: torch.Tensor, context: torch.Tensor, weights: CrossAttention) -> torch.Tensor:
    """Cross-attention weights (B, heads, N, L); used for inspection."""
    if context.ndim == 2:
        context = context.unsqueeze(1)
    q = _split_heads(weights.to_q(x), weights.heads)
    k = _split_heads(weights.to_k(context.to(x.dtype)), weights.heads)
    return (q @ k.transpose(-1, -2) / math.sqrt(q.shape[-1])).softmax(dim=-1)
