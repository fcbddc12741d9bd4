"""Phrase embeddings, adapter projections, null embeddings and conditional dropout."""
from dataclasses import dataclass
from typing import List, Sequence, Union

import torch
from torch import nn

from ..errors import ParameterError, ShapeError
from .vocabulary import PhraseVocabulary

ADAPTER_SCALES = 2


@dataclass
class PhraseConditioning:
    """Batched text conditioning: global embedding plus per-layer adapter tokens."""

    global_embedding: torch.Tensor
    per_layer: List[torch.Tensor]
    is_null: torch.Tensor

    def __len__(self) -> int:
        return int(self.global_embedding.shape[0])

    def expand(self, batch_size: int) -> "PhraseConditioning":
        if len(self) == batch_size:
            return self
        if len(self) != 1:
            raise ShapeError(f"Cannot broadcast conditioning of batch {len(self)} to {batch_size}")
        return PhraseConditioning(
            self.global_embedding.expand(batch_size, -1),
            [tokens.expand(batch_size, -1, -1) for tokens in self.per_layer],
            self.is_null.expand(batch_size),
        )


class AdapterStack(nn.Module):
    """One linear projection D_txt -> M * C_l per injected denoiser scale."""

    def __init__(self, text_dim: int, widths: Sequence[int], tokens: int):
        super().__init__()
        if len(widths) != ADAPTER_SCALES:
            raise ParameterError(f"AdapterStack needs exactly {ADAPTER_SCALES} scales, got {len(widths)}")
        self.text_dim = text_dim
        self.widths = tuple(widths)
        self.tokens = tokens
        self.projections = nn.ModuleList(nn.Linear(text_dim, tokens * width) for width in widths)


def project_adapters(global_embedding: torch.Tensor, adapters: AdapterStack) -> List[torch.Tensor]:
    """e^p_l = reshape(W_l @ e^t + b_l) to (B, M, C_l) for every scale l."""
    if global_embedding.shape[-1] != adapters.text_dim:
        raise ShapeError(
            f"Adapter input width {global_embedding.shape[-1]} does not match text dim {adapters.text_dim}"
        )
    batched = global_embedding.ndim == 2
    embedding = global_embedding if batched else global_embedding.unsqueeze(0)
    features = [
        projection(embedding).view(embedding.shape[0], adapters.tokens, width)
        for projection, width in zip(adapters.projections, adapters.widths)
    ]
    return features if batched else [f[0] for f in features]


class PhraseEncoder(nn.Module):
    """Trainable text side: word embeddings, adapters and the learned null embeddings."""

    def __init__(self, vocab: PhraseVocabulary, text_dim: int, adapter_widths: Sequence[int], adapter_tokens: int):
        super().__init__()
        self.vocab = vocab
        self.text_dim = text_dim
        self.word_embeddings = nn.Embedding(len(vocab), text_dim)
        self.adapters = AdapterStack(text_dim, adapter_widths, adapter_tokens)
        self.null_global = nn.Parameter(torch.randn(text_dim) * 0.02)
        self.null_tokens = nn.ParameterList(
            nn.Parameter(torch.randn(adapter_tokens, width) * 0.02) for width in adapter_widths
        )

    def tokenize(self, phrases: Sequence[Union[str, Sequence[str]]]) -> torch.Tensor:
        """Padded (B, L) id tensor, -1 marking padding; ids sorted within each row."""
        encoded = [sorted(self.vocab.encode(p)) for p in phrases]
        length = max(len(ids) for ids in encoded)
        padded = torch.full((len(encoded), length), -1, dtype=torch.long)
        for row, ids in enumerate(encoded):
            padded[row, : len(ids)] = torch.tensor(ids, dtype=torch.long)
        return padded

    def pool(self, token_ids: torch.Tensor) -> torch.Tensor:
        """Mean of word embeddings over the non-padding positions of each row."""
        valid = token_ids >= 0
        vectors = self.word_embeddings(token_ids.clamp(min=0))
        vectors = vectors * valid.unsqueeze(-1).to(vectors.dtype)
        return vectors.sum(dim=1) / valid.sum(dim=1, keepdim=True).to(vectors.dtype)

    def condition(self, token_ids: torch.Tensor) -> PhraseConditioning:
        global_embedding = self.pool(token_ids)
        return PhraseConditioning(
            global_embedding,
            project_adapters(global_embedding, self.adapters),
            torch.zeros(global_embedding.shape[0], dtype=torch.bool, device=global_embedding.device),
        )

    def encode(self, phrases: Sequence[Union[str, Sequence[str]]]) -> PhraseConditioning:
        return self.condition(self.tokenize(phrases).to(self.null_global.device))

    def null(self, batch_size: int = 1) -> PhraseConditioning:
        return PhraseConditioning(
            self.null_global.unsqueeze(0).expand(batch_size, -1),
            [tokens.unsqueeze(0).expand(batch_size, -1, -1) for tokens in self.null_tokens],
            torch.ones(batch_size, dtype=torch.bool, device=self.null_global.device),
        )


def embed_phrase(phrase: Union[str, Sequence[str]], encoder: PhraseEncoder) -> torch.Tensor:
    """Global D_txt embedding of one phrase (mean of its word embeddings)."""
    return encoder.pool(encoder.tokenize([phrase]).to(encoder.null_global.device))[0]


def null_conditioning(encoder: PhraseEncoder, batch_size: int = 1) -> PhraseConditioning:
    return encoder.null(batch_size)


def apply_drop_mask(cond: PhraseConditioning, null: PhraseConditioning, drop: torch.Tensor) -> PhraseConditioning:
    """Replace global and adapter features together wherever ``drop`` is set."""
    null = null.expand(len(cond))
    if drop.shape != (len(cond),):
        raise ShapeError(f"Drop mask of shape {tuple(drop.shape)} for a batch of {len(cond)}")
    drop = drop.to(cond.global_embedding.device)
    global_embedding = torch.where(drop.unsqueeze(-1), null.global_embedding, cond.global_embedding)
    per_layer = [
        torch.where(drop.view(-1, 1, 1), null_tokens, tokens)
        for tokens, null_tokens in zip(cond.per_layer, null.per_layer)
    ]
    return PhraseConditioning(global_embedding, per_layer, cond.is_null | drop)


def conditional_dropout(
    cond: PhraseConditioning,
    null: PhraseConditioning,
    p_drop: float,
    generator: torch.Generator,
) -> PhraseConditioning:
    """Per sample, swap in the null conditioning with probability ``p_drop``."""
    if not 0.0 <= p_drop <= 1.0:
        raise ParameterError(f"p_drop must lie in [0, 1], got {p_drop}")
    drop = torch.rand(len(cond), generator=generator) < p_drop
    if not bool(drop.any()):
        return cond
    return apply_drop_mask(cond, null, drop)
