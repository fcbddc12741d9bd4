import math

import pytest
import torch

from label_diffusion.denoiser.attention import (
    CrossAttention,
    InjectedSelfAttention,
    attention_probabilities,
    cross_attention,
    injected_self_attention,
)
from label_diffusion.errors import ShapeError


@pytest.fixture
def self_attn():
    torch.manual_seed(0)
    return InjectedSelfAttention(32, heads=1)


def plain_self_attention(x, weights):
    q, k, v = weights.to_q(x), weights.to_k(x), weights.to_v(x)
    probs = (q @ k.transpose(-1, -2) / math.sqrt(x.shape[-1])).softmax(dim=-1)
    return weights.to_out(probs @ v)


def test_output_keeps_image_rows(self_attn):
    out = injected_self_attention(torch.randn(2, 16, 32), torch.randn(2, 4, 32), self_attn)
    assert out.shape == (2, 16, 32)


def test_no_adapter_tokens_is_plain_self_attention(self_attn):
    x = torch.randn(1, 16, 32)
    expected = plain_self_attention(x, self_attn)
    assert torch.allclose(injected_self_attention(x, None, self_attn), expected, atol=1e-6)
    assert torch.allclose(injected_self_attention(x, torch.zeros(1, 0, 32), self_attn), expected, atol=1e-6)


def test_adapter_permutation_invariance(self_attn):
    x = torch.randn(1, 16, 32)
    tokens = torch.randn(1, 4, 32)
    a = injected_self_attention(x, tokens, self_attn)
    b = injected_self_attention(x, tokens[:, torch.tensor([2, 0, 3, 1])], self_attn)
    assert torch.max(torch.abs(a - b)).item() <= 1e-6


def test_adapters_change_output(self_attn):
    x = torch.randn(1, 16, 32)
    assert not torch.allclose(
        injected_self_attention(x, None, self_attn), injected_self_attention(x, torch.randn(1, 4, 32), self_attn)
    )


def test_multi_head_shapes():
    weights = InjectedSelfAttention(16, heads=4)
    assert injected_self_attention(torch.randn(3, 9, 16), torch.randn(3, 2, 16), weights).shape == (3, 9, 16)


def test_width_mismatch(self_attn):
    with pytest.raises(ShapeError):
        injected_self_attention(torch.randn(1, 16, 16), None, self_attn)
    with pytest.raises(ShapeError):
        injected_self_attention(torch.randn(1, 16, 32), torch.randn(1, 4, 16), self_attn)


def test_cross_attention_single_token_weights_are_one():
    weights = CrossAttention(16, 8, heads=2)
    probs = attention_probabilities(torch.randn(2, 10, 16), torch.randn(2, 8), weights)
    assert probs.shape == (2, 2, 10, 1)
    assert torch.allclose(probs, torch.ones_like(probs))


def test_cross_attention_zero_value_is_residual():
    weights = CrossAttention(16, 8)
    with torch.no_grad():
        weights.to_v.weight.zero_()
    x = torch.randn(2, 10, 16)
    assert torch.equal(cross_attention(x, torch.randn(2, 8), weights), x)


def test_cross_attention_shape_mismatch():
    weights = CrossAttention(16, 8)
    with pytest.raises(ShapeError):
        cross_attention(torch.randn(2, 10, 16), torch.randn(2, 7), weights)
    with pytest.raises(ShapeError):
        cross_attention(torch.randn(2, 10, 16), torch.randn(3, 8), weights)
