"""Configuration for the nonharmonic spectral toolkit."""
import os
import logging
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

logger = logging.getLogger(__name__)


class Config:
    """Application configuration."""

    # Parallelism
    NHS_THREADS: int = int(os.getenv("NHS_THREADS", "1"))

    # Reproducibility
    NHS_SEED: int = int(os.getenv("NHS_SEED", "0"))

    # Diagnostics defaults
    NHS_REL_TOL: float = float(os.getenv("NHS_REL_TOL", "1e-12"))
    NHS_LIOUVILLE_THRESHOLD: float = float(os.getenv("NHS_LIOUVILLE_THRESHOLD", "3.5"))
    NHS_QMAX: int = int(os.getenv("NHS_QMAX", "10000"))

    # Logging
    LOG_LEVEL: str = os.getenv("NHS_LOG_LEVEL", "INFO")

    # File paths
    BASE_DIR: str = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))  # Project root directory
    OUTPUT_DIR: str = os.getenv("NHS_OUTPUT_DIR", "output")

    @classmethod
    def validate(cls) -> bool:
        """Validate that configured values are usable."""
        problems = []
        if cls.NHS_THREADS < 1:
            problems.append("NHS_THREADS must be >= 1")
        if cls.NHS_REL_TOL <= 0:
            problems.append("NHS_REL_TOL must be > 0")
        if cls.NHS_LIOUVILLE_THRESHOLD <= 1:
            problems.append("NHS_LIOUVILLE_THRESHOLD must be > 1")
        if cls.NHS_QMAX < 2:
            problems.append("NHS_QMAX must be >= 2")

        if problems:
            for problem in problems:
                logger.error(f"❌ {problem}")
            return False

        return True

    @classmethod
    def thread_cap(cls) -> int:
        """Worker threads allowed for parallel inner loops."""
        return max(1, cls.NHS_THREADS)

    @classmethod
    def get_output_dir_path(cls) -> str:
        """Get full path to output directory."""
        if os.path.isabs(cls.OUTPUT_DIR):
            return cls.OUTPUT_DIR
        return os.path.join(cls.BASE_DIR, cls.OUTPUT_DIR)

# Global config instance
config = Config()
