"""slidenorm: sliding-window heavy hitters, symmetric norms and Orlicz coresets.

Usage:
  main.py gen --variant=<v> --out=<path> [--m=<m>] [--n=<n>] [--d=<d>] [--response] [--zipf-s=<s>] [--seed=<s>]
  main.py run hh <file> [--W=<w>] [--eta=<e>] [--nu=<v>] [--seed=<s>] [--reps=<r>] [--out=<path>]
  main.py run norm <file> [--W=<w>] [--eps=<e>] [--norm=<names>] [--p=<p>] [--k=<k>] [--mmc=<cap>] [--mode=<mode>] [--rate=<rates>] [--seed=<s>] [--reps=<r>] [--out=<path>]
  main.py run orlicz <file> [--W=<w>] [--eps=<e>] [--g=<name>] [--seed=<s>] [--reps=<r>] [--out=<path>] [--coreset-out=<path>]
  main.py (-h | --help)

Options:
  --variant=<v>     appendix-c, zipf, uniform (item streams) or gaussian, rotating (row streams).
  --out=<path>      Output file. For run, defaults to $SLIDENORM_RESULTS or results.csv.
  --m=<m>           Stream length (rows for row streams) [default: 1024].
  --n=<n>           Universe size [default: 65536].
  --d=<d>           Row dimension for row streams [default: 4].
  --response        Append a response column to generated rows.
  --zipf-s=<s>      Zipf exponent [default: 1.1].
  --W=<w>           Window length; defaults to the whole stream.
  --eps=<e>         Accuracy [default: 0.2].
  --eta=<e>         Heavy-hitter threshold [default: 0.1].
  --nu=<v>          Heavy-hitter frequency accuracy, below 1/4 [default: 0.2].
  --norm=<names>    Comma-separated norms: l1, l2, lp, topk, ksupport [default: l2].
  --p=<p>           p for lp.
  --k=<k>           k for topk and ksupport.
  --mmc=<cap>       Grid capacity (largest mmc served); defaults to the largest requested norm's.
  --mode=<mode>     provable or practical [default: practical].
  --rate=<rates>    Comma-separated baseline sampling rates [default: 0.1].
  --g=<name>        Orlicz G: square, identity, huber, power [default: huber].
  --seed=<s>        Seed; defaults to $SLIDENORM_SEED or 0.
  --reps=<r>        Repetitions over consecutive seeds [default: 1].
  --coreset-out=<path>  Also write the coreset of the first seed as CSV.

Exit codes: 0 success, 2 config or input error, 3 capacity error, 4 numeric error.
"""
import importlib
import logging
import os
import sys

from docopt import DocoptExit, docopt
from dotenv import load_dotenv

from errors import SlideNormError, exit_code_for

load_dotenv()
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")

logger = logging.getLogger("slidenorm")

COMMAND_MODULES = ["commands.gen", "commands.run"]


def load_commands() -> dict:
    registry = {}
    for name in COMMAND_MODULES:
        importlib.import_module(name).setup(registry)
    return registry


def main(argv=None) -> int:
    logging.basicConfig(level=LOG_LEVEL, format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    try:
        args = docopt(__doc__, argv=argv)
    except DocoptExit as exc:
        print(exc, file=sys.stderr)
        return 2

    from commands.config import config_from_args

    registry = load_commands()
    try:
        config = config_from_args(args)
        path = registry[config.subcommand](config)
    except (SlideNormError, OSError) as exc:
        logger.error("%s", exc)
        return exit_code_for(exc)
    print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
