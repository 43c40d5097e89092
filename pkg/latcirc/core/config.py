"""
Toolkit configuration settings.
"""
from pydantic import Field
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Toolkit settings."""

    PROJECT_NAME: str = "latcirc"
    VERSION: str = "0.1.0"

    # Brute-force oracle
    ENUMERATION_CAP_QUBIT: int = Field(
        default=24,
        description="Maximum free spins enumerated for q=2 models"
    )
    ENUMERATION_CAP_QUTRIT: int = Field(
        default=15,
        description="Maximum free spins enumerated for q>=3 models"
    )
    ENUMERATION_CHUNK: int = Field(
        default=32768,
        description="Configurations evaluated per oracle work unit"
    )

    # Dense simulation
    TRACE_CAP: int = Field(default=14, description="Maximum trace width in qubits")
    SIMULATION_CAP: int = Field(
        default=24,
        description="Maximum state width in qubit equivalents"
    )

    # Tolerances
    IDENTITY_TOLERANCE: float = 1e-12
    END_TO_END_TOLERANCE: float = 1e-9
    UNITARY_TOLERANCE: float = 1e-10

    # Encodings and compilers
    INVERSE_SEARCH_CAP: int = Field(
        default=1_000_000,
        description="Largest power tried by find_inverse_power"
    )
    DEFAULT_EPSILON: float = Field(default=1e-3, description="Potts filter parameter")
    DEFAULT_ZETA: float = Field(default=1e-3, description="LGT identity parameter")

    # Estimators
    DEFAULT_ESTIMATOR_EPSILON: float = 0.05
    DEFAULT_ESTIMATOR_DELTA: float = 0.01
    SHOT_BLOCK: int = Field(
        default=65536,
        description="Shots per independently seeded sampling block"
    )
    DEFAULT_SEED: int = 0

    # Runtime
    LATCIRC_THREADS: int = Field(default=1, description="Worker thread cap")
    LOG_LEVEL: str = Field(default="INFO", description="CLI log level")

    class Config:
        env_file = ".env"
        case_sensitive = True

    def enumeration_cap(self, q: int) -> int:
        """Return the free-spin enumeration cap for qudit dimension q."""
        return self.ENUMERATION_CAP_QUBIT if q == 2 else self.ENUMERATION_CAP_QUTRIT

    def worker_count(self, tasks: int) -> int:
        """Return the number of pool workers to use for `tasks` work units."""
        return max(1, min(self.LATCIRC_THREADS, tasks))


settings = Settings()
