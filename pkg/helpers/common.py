import hashlib
import json
import time
from dataclasses import fields, is_dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Callable, Tuple
from sympy import Basic
from models.errors import ParseError


def parse_scalar(value: Any) -> Fraction:
    """
    Parse an exact rational from an int, a Fraction or a "p/q" / "n" string.

    Args:
        value (Any): The raw value.

    Returns:
        Fraction: The rational.
    """
    if isinstance(value, bool) or isinstance(value, float):
        raise ParseError(f"Expected an exact rational, got {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"Invalid rational: {value!r}")
    raise ParseError(f"Expected a rational, got {type(value).__name__}")


def parse_int(value: Any, what: str = "value") -> int:
    scalar = parse_scalar(value)
    if scalar.denominator != 1:
        raise ParseError(f"Expected an integer {what}, got {value!r}")
    return int(scalar)


def format_scalar(value: Any) -> str:
    value = Fraction(value)
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def jsonable(obj: Any) -> Any:
    """
    Convert results to JSON-compatible values; rationals become exact strings.
    """
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, float, str)):
        return obj
    if isinstance(obj, Fraction):
        return format_scalar(obj)
    if isinstance(obj, Basic):
        # irrational power norm values
        return str(obj)
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k) if not isinstance(k, tuple) else json.dumps(jsonable(k)): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [jsonable(v) for v in items]
    if is_dataclass(obj):
        return {f.name: jsonable(getattr(obj, f.name)) for f in fields(obj)}
    raise TypeError(f"Cannot serialize {type(obj).__name__}")


def digest(data: Any) -> str:
    """
    SHA-256 of the canonical JSON form of the data.
    """
    canonical = json.dumps(jsonable(data), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def process_data(func: Callable, *args: Any, **kwargs: Any) -> Tuple[Any, float]:
    """
    Run the function and time it.

    Args:
        func (Callable): The function to run.

    Returns:
        Tuple[Any, float]: The result and the processing time in seconds.
    """
    start_time = time.time()
    result = func(*args, **kwargs)
    proctime = time.time() - start_time
    return result, proctime
