import re
from typing import Dict, Optional

from errors import InputError

_HEADER_PAIR = re.compile(r"(\w+)=(\S+)")


def parse_header(line: str) -> Dict[str, str]:
    """Parse a ``#key=value key=value`` header line."""
    if not line or not line.startswith("#"):
        raise InputError(f"expected a '#key=value' header, got {line!r}")
    pairs = dict(_HEADER_PAIR.findall(line[1:]))
    if not pairs:
        raise InputError(f"header carries no key=value pairs: {line!r}")
    return pairs


def format_header(**fields) -> str:
    return "#" + " ".join(f"{k}={v}" for k, v in fields.items())


def header_int(pairs: Dict[str, str], key: str, default: Optional[int] = None) -> int:
    raw = pairs.get(key)
    if raw is None:
        if default is None:
            raise InputError(f"header missing '{key}'")
        return default
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"header field {key}={raw!r} is not an integer") from None


def format_key_values(values: Dict[str, object]) -> str:
    """Flat ``key=value`` block, one pair per line."""
    return "\n".join(f"{k}={v}" for k, v in values.items())
