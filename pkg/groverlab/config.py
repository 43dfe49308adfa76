"""
Application configuration using Pydantic Settings
"""

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings"""

    # Application
    app_name: str = "GroverLab"
    debug: bool = False

    # Logging
    log_level: str = "WARNING"
    log_json: bool = False

    # Numerical tolerances
    amplitude_tol: float = 1e-12
    matrix_tol: float = 1e-10
    measure_norm_tol: float = 1e-6

    # Size limits (qubits)
    max_dense_qubits: int = 12
    max_statevector_qubits: int = 24
    max_analytic_qubits: int = 30
    max_compiled_qubits: int = 12
    max_verify_qubits: int = 5

    # Sampling
    default_shots: int = 1024
    default_seed: int = 0

    sweep_workers: int = 4

    model_config = SettingsConfigDict(
        env_file=".env",
        env_prefix="GROVERLAB_",
        case_sensitive=False,
        extra="allow",
    )


# Global settings instance
settings = Settings()
