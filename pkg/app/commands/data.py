import click
from pydantic import ValidationError

from app.commands.common import RunContext, fail, split_list
from app.schemas.dataset import SyntheticConfig
from app.services import DatasetService

SYNTH_FLAGS = {
    "num_users": "--users",
    "num_items": "--items",
    "power_exponent": "--exponent",
    "edges_target": "--edges",
    "num_blocks": "--blocks",
    "seed": "--seed",
}


@click.command("prepare")
@click.option("--input", "input_path", required=True, help="Log de interacciones CSV/TSV")
@click.option("--min-rating", type=float, default=0.0, show_default=True)
@click.option("--split", "ratios", default="0.7,0.1,0.2", show_default=True, callback=split_list(float))
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", required=True, help="Directorio del dataset")
def prepare(input_path, min_rating, ratios, seed, out):
    """Ingiere un log de interacciones y lo particiona en train/val/test"""
    run = RunContext("prepare", out)
    success, message, split = DatasetService(run.store).prepare(input_path, min_rating, ratios, seed)
    if not success:
        fail(message)

    run.finish(
        config={"input": str(input_path), "min_rating": min_rating, "split": ratios},
        seed=seed,
        dataset_fingerprint=DatasetService.fingerprint(out),
    )
    click.echo(f"{message}: {split.num_users} usuarios, {split.num_items} ítems, {split.split_sizes()}")


@click.command("synth")
@click.option("--users", type=int, required=True)
@click.option("--items", type=int, required=True)
@click.option("--exponent", type=float, default=2.1, show_default=True)
@click.option("--edges", type=int, required=True)
@click.option("--blocks", type=int, default=8, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--split", "ratios", default="0.7,0.1,0.2", show_default=True, callback=split_list(float))
@click.option("--out", required=True, help="Directorio del dataset")
def synth(users, items, exponent, edges, blocks, seed, ratios, out):
    """Genera un dataset sintético de cola larga"""
    try:
        config = SyntheticConfig(
            num_users=users,
            num_items=items,
            power_exponent=exponent,
            edges_target=edges,
            num_blocks=blocks,
            seed=seed,
        )
    except ValidationError as e:
        first = e.errors()[0]
        fail(f"{SYNTH_FLAGS.get(str(first['loc'][0]), first['loc'][0])}: {first['msg']}")

    run = RunContext("synth", out)
    success, message, split = DatasetService(run.store).synth(config, ratios)
    if not success:
        fail(message)

    run.finish(
        config=config.model_dump(mode="json"),
        seed=seed,
        dataset_fingerprint=DatasetService.fingerprint(out),
    )
    click.echo(f"{message}: {split.split_sizes()}")
