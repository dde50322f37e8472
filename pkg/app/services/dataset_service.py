"""
Servicio de preparación de datasets
"""
from pathlib import Path
from typing import Optional, Sequence, Tuple, Union

from app.models.dataset_model import SplitDataset
from app.repositories import DatasetRepository
from app.schemas.dataset import SyntheticConfig
from app.utils.audit import AuditLogger
from app.utils.exceptions import LagclError
from app.utils.fingerprint import fingerprint_directory
from app.utils.interactions import load_interactions, split_dataset
from app.utils.storage import ArtifactStore, FileValidator
from app.utils.synthetic import generate_synthetic


class DatasetService:

    def __init__(self, store: ArtifactStore):
        self.store = store
        self.dataset_repo = DatasetRepository(store)

    def prepare(
        self,
        input_path: Union[str, Path],
        min_rating: float = 0.0,
        ratios: Sequence[float] = (0.7, 0.1, 0.2),
        seed: int = 0,
    ) -> Tuple[bool, str, Optional[SplitDataset]]:
        try:
            ok, message = FileValidator.validate_input(input_path, "--input")
            if not ok:
                return False, message, None

            interactions = load_interactions(input_path, min_rating=min_rating)
            split = split_dataset(interactions, ratios=ratios, seed=seed)
            split.min_rating = min_rating
            split.source = Path(input_path).name
            self.dataset_repo.save_split(split)

            AuditLogger.log_action(
                action="dataset_prepared",
                resource=str(self.store.root),
                details={"users": split.num_users, "items": split.num_items, **split.split_sizes()},
            )
            return True, "Dataset preparado exitosamente", split

        except LagclError as e:
            return False, str(e), None
        except Exception as e:
            return False, f"Error preparando dataset: {str(e)}", None

    def synth(
        self,
        config: SyntheticConfig,
        ratios: Sequence[float] = (0.7, 0.1, 0.2),
    ) -> Tuple[bool, str, Optional[SplitDataset]]:
        try:
            interactions = generate_synthetic(config)
            split = split_dataset(interactions, ratios=ratios, seed=config.seed)
            split.source = "synthetic"
            self.dataset_repo.save_split(split)
            self.dataset_repo.save_interactions(interactions)

            AuditLogger.log_action(
                action="dataset_synthesized",
                resource=str(self.store.root),
                details={"edges": interactions.num_edges, "exponent": config.power_exponent},
            )
            return True, "Dataset sintético generado exitosamente", split

        except LagclError as e:
            return False, str(e), None
        except Exception as e:
            return False, f"Error generando dataset sintético: {str(e)}", None

    @staticmethod
    def load(data_dir: Union[str, Path]) -> Tuple[bool, str, Optional[SplitDataset]]:
        try:
            ok, message = FileValidator.validate_directory(data_dir, "--data", tuple(DatasetRepository.file_names()))
            if not ok:
                return False, message, None
            split = DatasetRepository.at(data_dir).load_split()
            return True, "Dataset cargado", split
        except LagclError as e:
            return False, f"--data: {e}", None
        except Exception as e:
            return False, f"Error cargando dataset: {str(e)}", None

    @staticmethod
    def fingerprint(data_dir: Union[str, Path]) -> str:
        return fingerprint_directory(data_dir, DatasetRepository.file_names())
