"""Walk specification files and JSON output.

A spec file is a JSON object::

    {"left_tail": SITE, "right_tail": SITE, "exceptions": {"0": SITE, ...},
     "state": [[re, im], [re, im]]}

where each SITE is either coefficient form ``{"r", "a", "b", "c", "d"}``
(angles in radians) or vector form ``{"xi_right", "xi_left", "zeta_to_left",
"zeta_to_right"}`` with every vector given as ``[[re, im], [re, im]]``.
``exceptions`` and ``state`` are optional.  A state is given in the basis of
the file; when site 0 is in vector form it is rotated into standard gauge.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np

from .core import CoeffSite, SiteVectors, WalkSpec, coeffs_from_vectors
from .errors import ParseError, QW1DError, ValidationError

_COEFF_KEYS = ("r", "a", "b", "c", "d")
_VECTOR_KEYS = ("xi_right", "xi_left", "zeta_to_left", "zeta_to_right")


@dataclass(frozen=True, eq=False)
class ParsedSpec:
    spec: WalkSpec
    state: np.ndarray | None = None


def _number(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"{where}: expected a number, got {value!r}")
    return float(value)


def _vector(value: Any, where: str) -> np.ndarray:
    if not (isinstance(value, list) and len(value) == 2):
        raise ParseError(f"{where}: expected [[re, im], [re, im]]")
    out = []
    for k, pair in enumerate(value):
        if not (isinstance(pair, list) and len(pair) == 2):
            raise ParseError(f"{where}[{k}]: expected [re, im]")
        out.append(complex(_number(pair[0], f"{where}[{k}][0]"),
                           _number(pair[1], f"{where}[{k}][1]")))
    return np.array(out)


def _site(value: Any, where: str) -> tuple[CoeffSite, np.ndarray | None]:
    """Parse one site; also return the outgoing frame for vector-form sites."""
    if not isinstance(value, dict):
        raise ParseError(f"{where}: expected an object")
    if "xi_right" in value:
        missing = [k for k in _VECTOR_KEYS if k not in value]
        if missing:
            raise ParseError(f"{where}: missing {', '.join(missing)}")
        sv = SiteVectors(*(_vector(value[k], f"{where}.{k}") for k in _VECTOR_KEYS))
        try:
            site = coeffs_from_vectors(sv)
        except QW1DError as exc:
            raise ValidationError(f"{where}: {exc}") from exc
        frame = np.array([sv.xi_right.conj(), sv.xi_left.conj()])
        return site, frame
    missing = [k for k in _COEFF_KEYS if k not in value]
    if missing:
        raise ParseError(f"{where}: missing {', '.join(missing)}")
    nums = [_number(value[k], f"{where}.{k}") for k in _COEFF_KEYS]
    try:
        return CoeffSite(*nums), None
    except QW1DError as exc:
        raise ValidationError(f"{where}: {exc}") from exc


def parse_state(text: str) -> np.ndarray:
    """Parse ``"a+bi,c+di"`` (``i`` or ``j`` as imaginary unit) into a C^2 vector."""
    parts = text.split(",")
    if len(parts) != 2:
        raise ParseError(f"state {text!r}: expected two comma-separated amplitudes")
    try:
        return np.array([complex(p.strip().replace(" ", "").replace("i", "j")) for p in parts])
    except ValueError:
        raise ParseError(f"state {text!r}: not a pair of complex numbers") from None


def spec_from_dict(data: Any) -> ParsedSpec:
    if not isinstance(data, dict):
        raise ParseError("top level: expected an object")
    for key in ("left_tail", "right_tail"):
        if key not in data:
            raise ParseError(f"top level: missing {key}")
    left, _ = _site(data["left_tail"], "left_tail")
    right, right_frame = _site(data["right_tail"], "right_tail")
    exceptions, frame0 = {}, right_frame
    raw = data.get("exceptions", {})
    if not isinstance(raw, dict):
        raise ParseError("exceptions: expected an object keyed by site index")
    for key, value in raw.items():
        try:
            n = int(key)
        except ValueError:
            raise ParseError(f"exceptions: site index {key!r} is not an integer") from None
        exceptions[n], frame = _site(value, f"exceptions.{key}")
        if n == 0:
            frame0 = frame
    state = None
    if "state" in data:
        raw_state = data["state"]
        state = (parse_state(raw_state) if isinstance(raw_state, str)
                 else _vector(raw_state, "state"))
        if frame0 is not None:
            state = frame0 @ state
    return ParsedSpec(WalkSpec(left, right, exceptions), state)


def parse_spec_file(path) -> ParsedSpec:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    try:
        return spec_from_dict(data)
    except (ParseError, ValidationError) as exc:
        raise type(exc)(f"{path}: {exc}") from None


def spec_to_dict(spec: WalkSpec) -> dict:
    return {
        "left_tail": spec.left_tail.to_dict(),
        "right_tail": spec.right_tail.to_dict(),
        "exceptions": {str(n): c.to_dict() for n, c in spec.exceptions.items()},
    }


def dumps(obj: Any, indent: int = 2) -> str:
    """JSON text with every float written to 17 significant digits."""

    def enc(x: Any, level: int) -> str:
        pad, inner = " " * (indent * level), " " * (indent * (level + 1))
        if isinstance(x, bool) or x is None:
            return json.dumps(x)
        if isinstance(x, (float, np.floating)):
            x = float(x)
            if not math.isfinite(x):
                raise ValueError("non-finite number in output")
            return f"{x:.17g}" if x != int(x) or abs(x) >= 1e17 else f"{x:.1f}"
        if isinstance(x, (int, np.integer, str)):
            return json.dumps(x if isinstance(x, str) else int(x))
        if isinstance(x, dict):
            if not x:
                return "{}"
            items = [f"{inner}{json.dumps(str(k))}: {enc(v, level + 1)}" for k, v in x.items()]
            return "{\n" + ",\n".join(items) + "\n" + pad + "}"
        if isinstance(x, (list, tuple)):
            if not x:
                return "[]"
            items = [f"{inner}{enc(v, level + 1)}" for v in x]
            return "[\n" + ",\n".join(items) + "\n" + pad + "]"
        raise TypeError(f"cannot serialize {type(x).__name__}")

    return enc(obj, 0)
