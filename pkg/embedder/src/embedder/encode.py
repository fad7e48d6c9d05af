"""Run a transformer encoder over corpus terms; emit token vectors as JSON lines.

Layer policy decides how hidden states become one vector per subword token:
sum_last_4 adds the last four hidden layers, last_layer takes the final one.
Special begin/end tokens are excluded so downstream pooling sums only
content subwords. The policy is recorded in the output meta line.
"""

import json
from dataclasses import dataclass

DEFAULT_MODEL = "cambridgeltl/BioRedditBERT-uncased"
LAYER_POLICIES = ("sum_last_4", "last_layer")


class ModelUnavailable(Exception):
    pass


class TokenizationFailure(Exception):
    pass


@dataclass(frozen=True)
class EmbedderConfig:
    model_id: str = DEFAULT_MODEL
    layer_policy: str = "sum_last_4"
    device: str = "cpu"
    batch_size: int = 16


def load_encoder(config: EmbedderConfig):
    """Load tokenizer + model; wraps load failures as ModelUnavailable."""
    import torch
    from transformers import AutoModel, AutoTokenizer

    if config.layer_policy not in LAYER_POLICIES:
        raise ValueError(f"layer_policy must be one of {LAYER_POLICIES}")
    try:
        tokenizer = AutoTokenizer.from_pretrained(config.model_id)
        model = AutoModel.from_pretrained(config.model_id)
    except Exception as exc:
        raise ModelUnavailable(f"cannot load {config.model_id!r}: {exc}") from exc
    model.to(torch.device(config.device))
    model.eval()
    return tokenizer, model


def _corpus_terms(corpus_doc):
    """Yield (term_id, term, concept_label) from a concept-index JSON document."""
    term_ids = corpus_doc.get("term_ids", {})
    n = 0
    for label, terms in corpus_doc["concepts"].items():
        for term in terms:
            tid = term_ids.get(term, f"t{n}")
            yield tid, term, label
            n += 1


def _token_vectors(hidden_states, policy):
    # hidden_states: tuple of (batch, seq, dim) tensors, embeddings first
    if policy == "sum_last_4":
        stacked = hidden_states[-4:] if len(hidden_states) >= 4 else hidden_states
        out = stacked[0].clone()
        for layer in stacked[1:]:
            out += layer
        return out
    return hidden_states[-1]


def embed_terms(corpus_doc, config: EmbedderConfig, out_stream):
    """Encode every corpus term and write the token-embedding JSON lines.

    Returns a list of (term, reason) tokenization failures; those terms are
    reported and skipped, the run continues.
    """
    import torch

    tokenizer, model = load_encoder(config)
    dim = model.config.hidden_size

    meta = {
        "type": "meta",
        "dim": dim,
        "model": config.model_id,
        "layer_policy": config.layer_policy,
    }
    out_stream.write(json.dumps(meta, ensure_ascii=False) + "\n")

    entries = list(_corpus_terms(corpus_doc))
    failures = []
    device = torch.device(config.device)
    for start in range(0, len(entries), config.batch_size):
        batch = entries[start : start + config.batch_size]
        texts = [term for _, term, _ in batch]
        try:
            enc = tokenizer(
                texts,
                padding=True,
                truncation=True,
                return_tensors="pt",
                return_special_tokens_mask=True,
            )
        except Exception as exc:
            for _, term, _ in batch:
                failures.append((term, str(exc)))
            continue
        special_mask = enc.pop("special_tokens_mask")
        with torch.no_grad():
            outputs = model(
                **{k: v.to(device) for k, v in enc.items()}, output_hidden_states=True
            )
        vectors = _token_vectors(outputs.hidden_states, config.layer_policy).cpu()
        for row, (tid, term, label) in enumerate(batch):
            keep = (enc["attention_mask"][row] == 1) & (special_mask[row] == 0)
            positions = keep.nonzero(as_tuple=True)[0]
            if positions.numel() == 0:
                failures.append((term, "no content tokens after tokenization"))
                continue
            ids = enc["input_ids"][row][positions]
            tokens = tokenizer.convert_ids_to_tokens(ids.tolist())
            vecs = vectors[row][positions]
            out_stream.write(
                json.dumps(
                    {
                        "term_id": tid,
                        "term": term,
                        "concept": label,
                        "tokens": tokens,
                        "vectors": [[float(x) for x in v] for v in vecs],
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )
    return failures
