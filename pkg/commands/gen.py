# commands/gen.py
import logging

from commands.config import RunConfig
from errors import ParameterError
from storage import write_rows, write_stream
from streamlab.generators import SyntheticSpec, gaussian_rows, generate, rotating_basis

logger = logging.getLogger(__name__)

ROW_VARIANTS = ("gaussian", "rotating")


def cmd_gen(config: RunConfig) -> str:
    """Write a generated stream file and return its path."""
    if not config.output:
        raise ParameterError("gen needs --out")
    if config.variant in ROW_VARIANTS:
        if config.variant == "gaussian":
            A, b = gaussian_rows(config.m, config.d, config.seed, response=config.response)
        else:
            A, b = rotating_basis(config.m, config.d, config.seed), None
        write_rows(config.output, A, b)
        logger.info("wrote %d rows of dimension %d to %s", A.shape[0], A.shape[1], config.output)
        return config.output

    spec = SyntheticSpec(m=config.m, n=config.n, seed=config.seed, variant=config.variant, zipf_s=config.zipf_s)
    write_stream(config.output, generate(spec), spec.n, spec.seed)
    logger.info("wrote %d updates to %s", spec.m, config.output)
    return config.output


def setup(registry: dict) -> None:
    registry["gen"] = cmd_gen
