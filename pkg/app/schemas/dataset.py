from typing import Dict, List, Optional

from pydantic import BaseModel, Field, field_validator


class SyntheticConfig(BaseModel):
    """Parámetros del generador sintético de cola larga"""
    num_users: int = Field(..., ge=1)
    num_items: int = Field(..., ge=1)
    power_exponent: float = Field(2.1, gt=1.0, description="Exponente de la ley de potencias")
    num_blocks: int = Field(8, ge=1, description="Comunidades latentes de preferencia")
    edges_target: int = Field(..., ge=1)
    seed: int = 0
    intra_block_prob: float = Field(0.8, ge=0.0, le=1.0)
    max_degree_fraction: float = Field(0.5, gt=0.0, le=1.0)

    @field_validator("seed")
    @classmethod
    def validate_seed(cls, v):
        if not 0 <= v < 2**64:
            raise ValueError("La semilla debe ser un entero de 64 bits sin signo")
        return v


class DatasetManifest(BaseModel):
    """Manifiesto JSON de un dataset serializado"""
    format_version: int = 1
    num_users: int
    num_items: int
    user_ids: List[str]
    item_ids: List[str]
    split_sizes: Dict[str, int]
    ratios: List[float]
    seed: int
    min_rating: Optional[float] = None
    source: str = ""
