import click
import torch

from app.commands import ablate, analyze, evaluate, gradcheck, prepare, synth, train
from app.config.settings import settings
from app.utils.audit import setup_app_logging


@click.group(help="Motor de recomendación LAGCL: ingesta, entrenamiento, evaluación y ablaciones")
@click.option("--log-level", default=None, help="Nivel de log; por defecto LAGCL_LOG_LEVEL")
@click.option("--log-format", type=click.Choice(["json", "console"]), default=None)
@click.version_option(settings.APP_VERSION, prog_name=settings.APP_NAME)
def cli(log_level, log_format):
    """Manejar configuración común de cada ejecución"""
    setup_app_logging(log_level, log_format)
    # checkpoints idénticos solo con un número fijo de hilos
    torch.set_num_threads(settings.LAGCL_THREADS)


cli.add_command(prepare)
cli.add_command(synth)
cli.add_command(train)
cli.add_command(gradcheck)
cli.add_command(evaluate)
cli.add_command(analyze)
cli.add_command(ablate)


if __name__ == "__main__":
    cli()
