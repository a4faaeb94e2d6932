"""
Logging configuration using loguru.

Library modules log through ``from loguru import logger``. The package disables
its own records on import and the CLI turns them back on through
``setup_logging``.
"""

import sys
from pathlib import Path
from typing import TYPE_CHECKING, Optional

from loguru import logger

if TYPE_CHECKING:
    from conley_surf.models.regularize_schemas import SurgeryStep


def setup_logging(
    level: str = "WARNING",
    log_file: Optional[Path] = None,
    color: bool = True,
) -> None:
    """
    Configure logging for the toolkit.

    Sets up loguru with:
    - stderr handler
    - optional file handler with rotation

    Args:
        level: Minimum level for every sink
        log_file: Extra file sink, rotated at 5 MB
        color: Colorize the stderr sink
    """
    logger.remove()
    logger.enable("conley_surf")

    logger.add(
        sys.stderr,
        format=(
            "<green>{time:HH:mm:ss}</green> | "
            "<level>{level: <8}</level> | "
            "<cyan>{name}</cyan>:<cyan>{function}</cyan> | "
            "<level>{message}</level>"
        ),
        level=level,
        colorize=color,
    )

    if log_file is not None:
        log_file.parent.mkdir(parents=True, exist_ok=True)
        logger.add(
            str(log_file),
            format="{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | {name}:{function}:{line} | {message}",
            level=level,
            rotation="5 MB",
            retention="14 days",
            backtrace=True,
        )

    logger.debug(f"Logging configured at {level}")


def log_surgery_step(block_name: str, step: "SurgeryStep") -> None:
    """
    Log one regularization cut.

    Args:
        block_name: Name of the block being regularized
        step: The recorded surgery step
    """
    logger.debug(
        f"[{block_name}] phase {step.phase} cut along {list(step.spine)}: "
        f"obstruction {step.obstruction_before}->{step.obstruction_after}, "
        f"chi {step.euler_before}->{step.euler_after}"
    )
