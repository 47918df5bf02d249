"""Deterministic transformer encoder in plain numpy.

Weights are drawn once from a seeded generator, so a model id fully
determines every output, offline, on any platform.  The encoder exposes all
hidden states; sentence vectors average the states from the second layer to
the last and then average over tokens.  Inputs longer than the positional
table truncate with a flag.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass

import numpy as np

MAX_TOKENS = 512

_TOKEN_RE = re.compile(r"\d+(?:\.\d+)+|\w+(?:[-'’]\w+)*|[^\w\s]")

_MODEL_RE = re.compile(r"^tiny-(\d+)x(\d+)-s(\d+)$")

DEFAULT_MODEL = "tiny-32x4-s7"


def parse_model_id(model_id: str) -> tuple[int, int, int]:
    """tiny-<dim>x<layers>-s<seed> -> (dim, layers, seed)."""
    match = _MODEL_RE.match(model_id)
    if not match:
        raise ValueError(
            f"unknown model id {model_id!r} (expected tiny-<dim>x<layers>-s<seed>)"
        )
    dim, layers, seed = (int(g) for g in match.groups())
    if dim % 4 != 0:
        raise ValueError("dim must be divisible by the head count (4)")
    if layers < 2:
        raise ValueError("need at least 2 layers to average layers 2..last")
    return dim, layers, seed


def _token_id(token: str, vocab_size: int) -> int:
    digest = hashlib.md5(token.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") % vocab_size


def _layer_norm(x: np.ndarray, gain: np.ndarray, bias: np.ndarray) -> np.ndarray:
    mean = x.mean(axis=-1, keepdims=True)
    var = x.var(axis=-1, keepdims=True)
    return gain * (x - mean) / np.sqrt(var + 1e-6) + bias


def _softmax(x: np.ndarray) -> np.ndarray:
    shifted = x - x.max(axis=-1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=-1, keepdims=True)


@dataclass(frozen=True)
class EncodedText:
    """All hidden states for one text: hidden[0] is the embedding output,
    hidden[i] the output of encoder layer i."""

    tokens: list[str]
    hidden: list[np.ndarray]
    truncated: bool


class TinyTransformerEncoder:
    """Self-attention encoder with seeded random weights.

    Not a trained model: it provides the embedding *contract* (deterministic
    vectors, hidden-state layout, truncation behavior) for development and
    offline testing, selected by model id like any other backend.
    """

    heads = 4
    vocab_size = 4096

    def __init__(self, model_id: str = DEFAULT_MODEL):
        self.model_id = model_id
        self.dim, self.layers, seed = parse_model_id(model_id)
        rng = np.random.default_rng(seed)
        scale = 0.1
        self.token_emb = rng.normal(0.0, scale, (self.vocab_size, self.dim))
        self.pos_emb = rng.normal(0.0, scale, (MAX_TOKENS, self.dim))
        self.blocks = []
        ffn_dim = self.dim * 2
        for _ in range(self.layers):
            self.blocks.append(
                {
                    "wq": rng.normal(0.0, scale, (self.dim, self.dim)),
                    "wk": rng.normal(0.0, scale, (self.dim, self.dim)),
                    "wv": rng.normal(0.0, scale, (self.dim, self.dim)),
                    "wo": rng.normal(0.0, scale, (self.dim, self.dim)),
                    "ln1_g": np.ones(self.dim),
                    "ln1_b": np.zeros(self.dim),
                    "w1": rng.normal(0.0, scale, (self.dim, ffn_dim)),
                    "b1": np.zeros(ffn_dim),
                    "w2": rng.normal(0.0, scale, (ffn_dim, self.dim)),
                    "b2": np.zeros(self.dim),
                    "ln2_g": np.ones(self.dim),
                    "ln2_b": np.zeros(self.dim),
                }
            )

    def tokenize(self, text: str) -> list[str]:
        return _TOKEN_RE.findall(text.lower())

    def _attention(self, h: np.ndarray, block: dict) -> np.ndarray:
        n, dim = h.shape
        head_dim = dim // self.heads
        q = (h @ block["wq"]).reshape(n, self.heads, head_dim).transpose(1, 0, 2)
        k = (h @ block["wk"]).reshape(n, self.heads, head_dim).transpose(1, 0, 2)
        v = (h @ block["wv"]).reshape(n, self.heads, head_dim).transpose(1, 0, 2)
        scores = q @ k.transpose(0, 2, 1) / np.sqrt(head_dim)
        mixed = _softmax(scores) @ v
        merged = mixed.transpose(1, 0, 2).reshape(n, dim)
        return merged @ block["wo"]

    def encode(self, text: str) -> EncodedText:
        tokens = self.tokenize(text)
        truncated = len(tokens) > MAX_TOKENS
        tokens = tokens[:MAX_TOKENS]
        if not tokens:
            return EncodedText(tokens=[], hidden=[], truncated=False)
        ids = np.array([_token_id(t, self.vocab_size) for t in tokens])
        h = self.token_emb[ids] + self.pos_emb[: len(tokens)]
        hidden = [h]
        for block in self.blocks:
            attended = _layer_norm(
                h + self._attention(h, block), block["ln1_g"], block["ln1_b"]
            )
            ffn = np.maximum(attended @ block["w1"] + block["b1"], 0.0)
            h = _layer_norm(
                attended + ffn @ block["w2"] + block["b2"],
                block["ln2_g"],
                block["ln2_b"],
            )
            hidden.append(h)
        return EncodedText(tokens=tokens, hidden=hidden, truncated=truncated)

    def sentence_vector(self, text: str) -> tuple[np.ndarray, bool, bool]:
        """Mean over hidden layers 2..last, then over tokens.

        Returns (vector, empty_flag, truncated_flag); empty inputs yield a
        flagged zero vector.
        """
        encoded = self.encode(text)
        if not encoded.tokens:
            return np.zeros(self.dim), True, False
        stacked = np.stack(encoded.hidden[2:])
        return stacked.mean(axis=0).mean(axis=0), False, encoded.truncated

    def token_vectors(self, text: str) -> tuple[list[str], np.ndarray, bool]:
        """Last-layer vector per token, with the tokenization used."""
        encoded = self.encode(text)
        if not encoded.tokens:
            return [], np.zeros((0, self.dim)), False
        return encoded.tokens, encoded.hidden[-1], encoded.truncated
