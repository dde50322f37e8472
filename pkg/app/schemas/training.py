from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.models.strategy_enum import AugmentSides, CLDenominator, KTScope


class Hyperparams(BaseModel):
    """Hiperparámetros de entrenamiento, una entrada por clave del archivo de configuración"""
    model_config = ConfigDict(extra="forbid")

    embedding_dim: int = Field(64, ge=1, description="d")
    layers: int = Field(2, ge=1, description="L")
    degree_threshold: int = Field(20, ge=1, description="k cabeza/cola")
    delta: float = Field(1.0, gt=0, description="Suavidad de Â")
    epsilon: float = Field(0.1, gt=0, description="Radio del ruido de las vistas")
    tau: float = Field(0.2, gt=0, description="Temperatura InfoNCE")

    lambda_trans: float = Field(1e-2, ge=0)
    lambda_adv: float = Field(1e-3, ge=0)
    lambda_cl: float = Field(0.02, ge=0)
    lambda_reg: float = Field(1e-4, ge=0)

    learning_rate: float = Field(1e-3, gt=0)
    disc_learning_rate: Optional[float] = Field(None, gt=0)
    disc_steps: int = Field(1, ge=1)
    batch_size: int = Field(2048, ge=1)
    epochs: int = Field(30, ge=1)
    patience: int = Field(10, ge=1)
    seed: int = Field(2023, ge=0)

    kt_scope: KTScope = KTScope.TAIL_ONLY
    augment_sides: AugmentSides = AugmentSides.BOTH
    cl_denominator: CLDenominator = CLDenominator.BATCH

    use_kt: bool = True
    use_auto_drop: bool = True
    use_adversarial: bool = True
    use_cl: bool = True

    eval_k: int = Field(20, ge=1)
    eval_batch_users: int = Field(1024, ge=1)

    @model_validator(mode="after")
    def fill_disc_learning_rate(self):
        if self.disc_learning_rate is None:
            self.disc_learning_rate = self.learning_rate
        return self


class EpochLog(BaseModel):
    epoch: int
    losses: Dict[str, float]
    val_recall: Optional[float] = None
    val_ndcg: Optional[float] = None


class TrainingSummary(BaseModel):
    epochs_run: int
    best_epoch: int
    best_val_recall: Optional[float] = None
    best_val_ndcg: Optional[float] = None
    initial_val_recall: Optional[float] = None
    stopped_early: bool
    history: List[EpochLog] = []


class ArraySpec(BaseModel):
    name: str
    shape: List[int]
    offset: int
    nbytes: int


class CheckpointManifest(BaseModel):
    """Manifiesto JSON del checkpoint; los arreglos van en orden declarado"""
    format_version: int = 1
    hyperparams: Hyperparams
    num_users: int
    num_items: int
    arrays: List[ArraySpec]
    training: Optional[TrainingSummary] = None
