from pydantic import Field
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    APP_NAME: str = "lagcl-engine"
    APP_VERSION: str = "1.0.0"

    # determinismo: un valor fijo de hilos produce checkpoints idénticos
    LAGCL_THREADS: int = Field(default=1, ge=1)

    LAGCL_LOG_LEVEL: str = "INFO"
    LAGCL_LOG_FORMAT: str = "json"
    LAGCL_LOG_FILE: str = ""

    class Config:
        env_file = ".env"
        case_sensitive = True
        extra = "ignore"


settings = Settings()
