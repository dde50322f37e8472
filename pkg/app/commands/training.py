from dataclasses import asdict

import click

from app.commands.common import RunContext, fail, split_list
from app.config.hyperparams import load_hyperparams
from app.models.variant_enum import Variant
from app.repositories import ReportRepository
from app.services import DatasetService, ExperimentService, TrainingService
from app.services.training_service import GRADIENT_SELECTORS
from app.utils.exceptions import ConfigError


def _load(data, config):
    success, message, split = DatasetService.load(data)
    if not success:
        fail(message)
    try:
        hp = load_hyperparams(config)
    except ConfigError as e:
        fail(str(e))
    return split, hp


@click.command("train")
@click.option("--data", required=True, help="Directorio del dataset")
@click.option("--config", default=None, help="Archivo `clave = valor` de hiperparámetros")
@click.option("--out", required=True, help="Directorio del checkpoint")
def train(data, config, out):
    """Entrena LAGCL y escribe checkpoint y log por época"""
    split, hp = _load(data, config)
    run = RunContext("train", out)
    success, message, result = TrainingService(run.store).train(split, hp)
    if not success:
        fail(message)

    run.finish(
        config=hp.model_dump(mode="json"),
        seed=hp.seed,
        dataset_fingerprint=DatasetService.fingerprint(data),
        epoch_wall_times=result.epoch_wall_times,
    )
    summary = result.checkpoint.training
    click.echo(f"{message}: {summary.epochs_run} épocas, mejor época {summary.best_epoch}")


@click.command("gradcheck")
@click.option("--data", required=True, help="Directorio del dataset")
@click.option("--config", default=None)
@click.option("--selector", "selectors", multiple=True, type=click.Choice(GRADIENT_SELECTORS), default=GRADIENT_SELECTORS)
@click.option("--h-step", type=float, default=1e-5, show_default=True)
@click.option("--tolerance", type=float, default=1e-4, show_default=True)
@click.option("--out", required=True)
def gradcheck(data, config, selectors, h_step, tolerance, out):
    """Compara gradientes analíticos con diferencias centrales en 64 bits"""
    split, hp = _load(data, config)
    run = RunContext("gradcheck", out)
    success, message, results = TrainingService.check_gradients(split, hp, tuple(selectors), h_step)
    if not success:
        fail(message)

    ReportRepository(run.store).write_json(
        "gradient_check.json",
        {name: asdict(result) for name, result in results.items()},
    )
    run.finish(config=hp.model_dump(mode="json"), seed=hp.seed, dataset_fingerprint=DatasetService.fingerprint(data))
    click.echo(message)
    worst = max(r.max_relative_error for r in results.values())
    if worst >= tolerance:
        fail(f"--tolerance: error relativo {worst:.3e} >= {tolerance:.1e}")


@click.command("ablate")
@click.option("--data", required=True, help="Directorio del dataset")
@click.option("--config", default=None)
@click.option(
    "--variant",
    "variants",
    multiple=True,
    type=click.Choice([v.value for v in Variant]),
    default=(Variant.FULL.value,),
    show_default=True,
)
@click.option("--k-sweep", default=None, callback=split_list(int), help="Umbrales de grado, p. ej. 5,10,20,40")
@click.option("--seeds", default=None, callback=split_list(int), help="Semillas, p. ej. 1,2,3,4,5")
@click.option("--out", default="ablation", show_default=True)
def ablate(data, config, variants, k_sweep, seeds, out):
    """Entrena y evalúa variantes del modelo; escribe la tabla de ablación"""
    split, hp = _load(data, config)
    if k_sweep is not None and any(k < 1 for k in k_sweep):
        fail("--k-sweep: todos los umbrales deben ser >= 1")
    run = RunContext("ablate", out)
    success, message, rows = ExperimentService(run.store).ablate(
        split, hp, [Variant(v) for v in variants], k_sweep=k_sweep, seeds=seeds
    )
    if not success:
        fail(message)

    run.finish(
        config={**hp.model_dump(mode="json"), "variants": list(variants), "k_sweep": k_sweep, "seeds": seeds},
        seed=hp.seed,
        dataset_fingerprint=DatasetService.fingerprint(data),
    )
    click.echo(message)
    for row in rows:
        click.echo(f"{row.variant}\tk={row.k}\tseed={row.seed}\trecall={row.recall:.4f}\tndcg={row.ndcg:.4f}")
