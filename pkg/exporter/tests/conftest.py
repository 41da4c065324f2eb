import json
import pathlib

import pytest

CORPUS_TEXT = "A B\tB A\nB B\nA A B\tB\n"
STUB_SPEC = "stub:A=0.5,B=0.3,<UB>=0.2"


@pytest.fixture()
def corpus_file(tmp_path):
    path = tmp_path / "corpus.txt"
    path.write_text(CORPUS_TEXT, encoding="utf-8")
    return path


@pytest.fixture(scope="session")
def tiny_checkpoint(tmp_path_factory):
    """A randomly initialized 2-layer GPT-2 saved locally, with a vocab map."""
    import torch
    from transformers import GPT2Config, GPT2LMHeadModel

    root = tmp_path_factory.mktemp("tiny_model")
    torch.manual_seed(0)
    config = GPT2Config(
        vocab_size=3,
        n_positions=16,
        n_embd=16,
        n_layer=2,
        n_head=2,
        n_inner=32,
        bos_token_id=0,
        eos_token_id=0,
    )
    GPT2LMHeadModel(config).save_pretrained(root)
    with open(root / "vocab.json", "w", encoding="utf-8") as f:
        json.dump({"<UB>": 0, "A": 1, "B": 2}, f)
    return root
