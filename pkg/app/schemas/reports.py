from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field


class MetricsReport(BaseModel):
    """Métricas top-K promediadas sobre usuarios con test no vacío"""
    k: int
    recall: float = Field(..., ge=0.0, le=1.0)
    ndcg: float = Field(..., ge=0.0, le=1.0)
    evaluated_users: int
    users: List[int] = []
    per_user_recall: List[float] = []
    per_user_ndcg: List[float] = []
    tail_recall: Optional[float] = None


class GroupMetrics(BaseModel):
    group: int
    users: int
    mean_degree: float
    recall: float
    ndcg: float


class GroupReport(BaseModel):
    """Usuarios en grupos de igual tamaño por grado de entrenamiento ascendente"""
    k: int
    groups: List[GroupMetrics]


class UniformityReport(BaseModel):
    side: str
    statistic: float = Field(..., le=0.0)
    sample_pairs: int
    sample_count: int
    bins: int = 64
    histogram: List[int]
    projection: str = "top-2 principal directions of the centered table, points scaled to the unit circle"


class AblationRow(BaseModel):
    variant: str
    k: int
    seed: int
    recall: float
    ndcg: float
    tail_recall: Optional[float] = None
    uniformity: float


class RunManifest(BaseModel):
    """Manifiesto de ejecución; único artefacto con marcas de tiempo"""
    command: str
    app_version: str
    config: Dict[str, Any] = {}
    seed: Optional[int] = None
    dataset_fingerprint: Optional[str] = None
    artifacts: List[str] = []
    started_at: str
    wall_clock_seconds: float
    epoch_wall_times: List[float] = []
