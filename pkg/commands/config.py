# commands/config.py
import os
from typing import List, Optional

import attrs

from errors import ParameterError

DEFAULT_SEED = int(os.getenv("SLIDENORM_SEED", "0"))


def _floats(value) -> List[float]:
    if value is None:
        return []
    if isinstance(value, str):
        value = value.split(",")
    return [float(v) for v in value if str(v).strip()]


def _names(value) -> List[str]:
    if value is None:
        return []
    if isinstance(value, str):
        value = value.split(",")
    return [str(v).strip() for v in value if str(v).strip()]


@attrs.define
class RunConfig:
    """Everything one CLI invocation needs; round-trips through JSON."""

    subcommand: str
    input: Optional[str] = None
    output: Optional[str] = None
    coreset_out: Optional[str] = None
    variant: str = "appendix-c"
    m: int = 1024
    n: int = 65536
    d: int = 4
    response: bool = False
    window: Optional[int] = None
    eps: float = 0.2
    eta: float = 0.1
    nu: float = 0.2
    norms: List[str] = attrs.field(factory=lambda: ["l2"], converter=_names)
    p: Optional[float] = None
    k: Optional[int] = None
    mmc: Optional[float] = None
    g: str = "huber"
    mode: str = "practical"
    seed: int = DEFAULT_SEED
    rates: List[float] = attrs.field(factory=lambda: [0.1], converter=_floats)
    reps: int = 1
    zipf_s: float = 1.1

    def __attrs_post_init__(self):
        if self.mode not in ("provable", "practical"):
            raise ParameterError(f"--mode must be provable or practical, got {self.mode!r}")
        if self.reps < 1:
            raise ParameterError(f"--reps must be at least 1, got {self.reps}")
        if self.window is not None and self.window < 1:
            raise ParameterError(f"--W must be at least 1, got {self.window}")


def _get(args: dict, flag: str, cast, default=None):
    value = args.get(flag)
    if value is None or value is False:
        return default
    try:
        return cast(value)
    except (TypeError, ValueError):
        raise ParameterError(f"{flag} got an invalid value {value!r}") from None


def config_from_args(args: dict) -> RunConfig:
    """Build a RunConfig from a docopt argument dict."""
    if args.get("gen"):
        subcommand = "gen"
    else:
        subcommand = next(name for name in ("hh", "norm", "orlicz") if args.get(name))
    defaults = RunConfig(subcommand)
    return RunConfig(
        subcommand=subcommand,
        input=args.get("<file>"),
        output=args.get("--out"),
        coreset_out=args.get("--coreset-out"),
        variant=_get(args, "--variant", str, defaults.variant),
        m=_get(args, "--m", int, defaults.m),
        n=_get(args, "--n", int, defaults.n),
        d=_get(args, "--d", int, defaults.d),
        response=bool(args.get("--response")),
        window=_get(args, "--W", int),
        eps=_get(args, "--eps", float, defaults.eps),
        eta=_get(args, "--eta", float, defaults.eta),
        nu=_get(args, "--nu", float, defaults.nu),
        norms=_get(args, "--norm", str, ",".join(defaults.norms)),
        p=_get(args, "--p", float),
        k=_get(args, "--k", int),
        mmc=_get(args, "--mmc", float),
        g=_get(args, "--g", str, defaults.g),
        mode=_get(args, "--mode", str, defaults.mode),
        seed=_get(args, "--seed", int, defaults.seed),
        rates=_get(args, "--rate", str, ",".join(str(r) for r in defaults.rates)),
        reps=_get(args, "--reps", int, defaults.reps),
        zipf_s=_get(args, "--zipf-s", float, defaults.zipf_s),
    )
