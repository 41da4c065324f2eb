"""Model backends: a fixed-distribution stub and a HuggingFace causal LM.

Both expose the same stepping interface: given a batch of contexts (id
sequences), return next-token probabilities and, optionally, the final-layer
hidden state the prediction was made from.
"""

from __future__ import annotations

import json
import pathlib

import numpy as np

from .corpus_text import ExportError


class StubModel:
    """Context-independent model emitting one fixed distribution.

    The hidden state is a one-hot of the last context token, which keeps
    embedding-dependent consumers testable without a neural runtime.
    """

    def __init__(self, distribution: dict[str, float]) -> None:
        if abs(sum(distribution.values()) - 1.0) > 1e-9 or any(
            p < 0 for p in distribution.values()
        ):
            raise ExportError("stub distribution must be a probability vector")
        self.vocab = {sym: i for i, sym in enumerate(distribution)}
        self.probs = np.array(list(distribution.values()), dtype=float)
        self.max_window = 1_000_000

    @classmethod
    def from_spec(cls, spec: str) -> "StubModel":
        """Parse ``stub:A=0.5,B=0.3,<UB>=0.2`` into a model."""
        body = spec[len("stub:") :]
        dist: dict[str, float] = {}
        for part in body.split(","):
            if "=" not in part:
                raise ExportError(f"bad stub entry {part!r}")
            sym, val = part.rsplit("=", 1)
            dist[sym] = float(val)
        return cls(dist)

    def step(self, contexts: list[list[int]], want_hidden: bool):
        batch = len(contexts)
        probs = np.tile(self.probs, (batch, 1))
        hidden = None
        if want_hidden:
            hidden = np.zeros((batch, len(self.vocab)))
            for row, ctx in enumerate(contexts):
                hidden[row, ctx[-1]] = 1.0
        return probs, hidden


class HFCausalModel:
    """A pretrained autoregressive LM loaded from a local checkpoint.

    The checkpoint directory must hold a ``vocab.json`` mapping each phoneme
    symbol (plus the utterance-boundary token) to its input id.  Batched
    contexts are left-padded; position ids are recomputed from the attention
    mask so padding never changes the prediction.
    """

    def __init__(self, path: str, device: str = "cpu") -> None:
        import torch
        from transformers import AutoModelForCausalLM

        self._torch = torch
        vocab_file = pathlib.Path(path) / "vocab.json"
        if not vocab_file.exists():
            raise ExportError(f"{path}: vocab.json with the symbol-to-id map is required")
        with open(vocab_file, "r", encoding="utf-8") as f:
            self.vocab = {str(k): int(v) for k, v in json.load(f).items()}
        self.device = device
        self.model = AutoModelForCausalLM.from_pretrained(path).to(device)
        self.model.eval()
        self.max_window = int(getattr(self.model.config, "n_positions", 1024))

    def step(self, contexts: list[list[int]], want_hidden: bool):
        torch = self._torch
        batch = len(contexts)
        width = max(len(c) for c in contexts)
        input_ids = torch.zeros((batch, width), dtype=torch.long)
        mask = torch.zeros((batch, width), dtype=torch.long)
        for row, ctx in enumerate(contexts):
            input_ids[row, width - len(ctx) :] = torch.tensor(ctx, dtype=torch.long)
            mask[row, width - len(ctx) :] = 1
        position_ids = (mask.cumsum(dim=-1) - 1).clamp(min=0)
        with torch.no_grad():
            out = self.model(
                input_ids=input_ids.to(self.device),
                attention_mask=mask.to(self.device),
                position_ids=position_ids.to(self.device),
                output_hidden_states=want_hidden,
            )
        logits = out.logits[:, -1, :].double()
        if not torch.isfinite(logits).all():
            raise ExportError("non-finite logits: softmax would overflow")
        probs = torch.softmax(logits, dim=-1).cpu().numpy()
        hidden = None
        if want_hidden:
            hidden = out.hidden_states[-1][:, -1, :].double().cpu().numpy()
        return probs, hidden


def load_model(identifier: str, device: str = "cpu"):
    if identifier.startswith("stub:"):
        return StubModel.from_spec(identifier)
    return HFCausalModel(identifier, device)
