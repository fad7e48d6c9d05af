import json
import sys

import click

from .encode import DEFAULT_MODEL, LAYER_POLICIES, EmbedderConfig, ModelUnavailable, embed_terms


@click.command()
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True),
              help="Concept-index JSON from the workbench's ingest step.")
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--model", "model_id", default=DEFAULT_MODEL, show_default=True)
@click.option("--layers", "layer_policy", type=click.Choice(LAYER_POLICIES),
              default="sum_last_4", show_default=True)
@click.option("--device", default="cpu", show_default=True)
@click.option("--batch-size", type=int, default=16, show_default=True)
def embed(corpus_path, out_path, model_id, layer_policy, device, batch_size):
    """Encode corpus terms and write token-level vectors as JSON lines."""
    with open(corpus_path, encoding="utf-8") as fh:
        corpus_doc = json.load(fh)
    config = EmbedderConfig(model_id=model_id, layer_policy=layer_policy,
                            device=device, batch_size=batch_size)
    tmp = str(out_path) + ".tmp"
    try:
        with open(tmp, "w", encoding="utf-8") as out:
            failures = embed_terms(corpus_doc, config, out)
    except ModelUnavailable as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    import os

    os.replace(tmp, out_path)
    for term, reason in failures:
        click.echo(f"tokenization failure for {term!r}: {reason}", err=True)
    click.echo(f"wrote {out_path} ({len(failures)} failures)")


def main():
    embed()


if __name__ == "__main__":
    main()
