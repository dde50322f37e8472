from pathlib import Path

import click

from app.commands.common import RunContext, fail
from app.models.strategy_enum import AugmentSides
from app.services import DatasetService, EvaluationService, TrainingService


def _load(data, ckpt):
    success, message, split = DatasetService.load(data)
    if not success:
        fail(message)
    success, message, checkpoint = TrainingService.load_checkpoint(ckpt)
    if not success:
        fail(message)
    return split, checkpoint


@click.command("evaluate")
@click.option("--data", required=True, help="Directorio del dataset")
@click.option("--ckpt", required=True, help="Directorio del checkpoint")
@click.option("--k", type=int, default=20, show_default=True)
@click.option("--out", default=None, help="Por defecto <ckpt>/evaluation")
def evaluate(data, ckpt, k, out):
    """Recall@K y NDCG@K por ranking completo sobre test"""
    split, checkpoint = _load(data, ckpt)
    run = RunContext("evaluate", out or Path(ckpt) / "evaluation")
    success, message, report = EvaluationService(run.store).evaluate(split, checkpoint, k)
    if not success:
        fail(message)

    run.finish(config={"k": k, "ckpt": str(ckpt)}, dataset_fingerprint=DatasetService.fingerprint(data))
    click.echo(message)


@click.command("analyze")
@click.option("--data", required=True, help="Directorio del dataset")
@click.option("--ckpt", required=True, help="Directorio del checkpoint")
@click.option("--mode", type=click.Choice(["degree-groups", "uniformity"]), required=True)
@click.option("--side", type=click.Choice([s.value for s in AugmentSides]), default=AugmentSides.BOTH.value, show_default=True)
@click.option("--k", type=int, default=20, show_default=True)
@click.option("--groups", type=int, default=10, show_default=True)
@click.option("--pairs", type=int, default=100_000, show_default=True, help="Pares muestreados para uniformidad")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", default=None, help="Por defecto <ckpt>/analysis")
def analyze(data, ckpt, mode, side, k, groups, pairs, seed, out):
    """Métricas por deciles de grado o diagnóstico de uniformidad"""
    split, checkpoint = _load(data, ckpt)
    if k < 1:
        fail("--k: debe ser >= 1")
    if groups < 1:
        fail("--groups: debe ser >= 1")
    if pairs < 1:
        fail("--pairs: debe ser >= 1")

    run = RunContext("analyze", out or Path(ckpt) / "analysis")
    service = EvaluationService(run.store)
    if mode == "degree-groups":
        success, message, _ = service.degree_groups(split, checkpoint, k=k, groups=groups)
    else:
        success, message, _ = service.uniformity(checkpoint, AugmentSides(side), sample_pairs=pairs, seed=seed)
    if not success:
        fail(message)

    run.finish(
        config={"mode": mode, "side": side, "k": k, "groups": groups, "pairs": pairs, "ckpt": str(ckpt)},
        seed=seed,
        dataset_fingerprint=DatasetService.fingerprint(data),
    )
    click.echo(message)
