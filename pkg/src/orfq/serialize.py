"""JSON encoding of pole sequences, measures and rational functions."""

from __future__ import annotations

import json
import numbers
from pathlib import Path

import numpy as np

from .errors import BadSpec
from .extc import INF, GammaSequence, is_inf
from .measure import Measure, make_measure
from .ratfun import RationalFunction


def complex_to_json(z):
    if is_inf(z):
        return "inf"
    z = complex(z)
    return {"re": float(z.real), "im": float(z.imag)}


def complex_from_json(obj):
    if isinstance(obj, str):
        if obj.strip().lower() in ("inf", "infinity", "∞"):
            return INF
        try:
            return complex(obj.replace(" ", ""))
        except ValueError as exc:
            raise BadSpec(f"cannot parse complex value {obj!r}") from exc
    if isinstance(obj, dict):
        try:
            return complex(float(obj.get("re", 0.0)), float(obj.get("im", 0.0)))
        except (TypeError, ValueError) as exc:
            raise BadSpec(f"bad complex object {obj!r}") from exc
    if isinstance(obj, (list, tuple)) and len(obj) == 2:
        return complex(float(obj[0]), float(obj[1]))
    if isinstance(obj, numbers.Number) and not isinstance(obj, bool):
        return complex(obj)
    raise BadSpec(f"cannot parse complex value {obj!r}")


def sequence_from_json(spec: dict) -> GammaSequence:
    """Accepts ``{"gamma0", "poles"}`` or ``{"alphas", "side"}`` (optional ``gamma0``)."""
    if not isinstance(spec, dict):
        raise BadSpec("pole spec must be a JSON object")
    g0 = spec.get("gamma0", "0")
    g0 = INF if str(g0).strip().lower() in ("inf", "infinity") else complex_from_json(g0)
    if "poles" in spec:
        poles = [complex_from_json(p) for p in spec["poles"]]
        return GammaSequence.from_gammas(poles, g0)
    if "alphas" in spec:
        alphas = [complex_from_json(a) for a in spec["alphas"]]
        if any(is_inf(a) for a in alphas):
            raise BadSpec("alphas must be finite")
        side = spec.get("side", "A" * len(alphas))
        if is_inf(g0):
            g0side = "B"
        elif g0 == 0:
            g0side = "A"
        else:
            raise BadSpec("gamma0 must be 0 or inf")
        return GammaSequence(tuple(alphas), side, g0side)
    raise BadSpec("pole spec needs 'poles' or 'alphas'")


def sequence_to_json(seq: GammaSequence) -> dict:
    return {
        "gamma0": "0" if seq.gamma0_side == "A" else "inf",
        "poles": [complex_to_json(g) for g in seq.gammas],
    }


def ratfun_to_json(f: RationalFunction) -> dict:
    return {"num": [complex_to_json(c) for c in f.num],
            "poles": [complex_to_json(p) for p in f.den_poles],
            "degree": int(f.n)}


def ratfun_from_json(obj: dict) -> RationalFunction:
    try:
        num = [complex_from_json(c) for c in obj["num"]]
        poles = tuple(complex_from_json(p) for p in obj.get("poles", []))
    except (KeyError, TypeError) as exc:
        raise BadSpec(f"malformed rational function: {exc}") from exc
    return RationalFunction(np.array(num, dtype=complex), poles, int(obj.get("degree", len(poles))))


def load_json(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise BadSpec(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise BadSpec(f"{path}: invalid JSON ({exc})") from exc


def load_sequence(path) -> GammaSequence:
    return sequence_from_json(load_json(path))


def load_measure(path) -> Measure:
    return make_measure(load_json(path))


def to_jsonable(obj):
    """Recursively convert numpy values, complex numbers and ``INF`` for ``json.dumps``."""
    if is_inf(obj):
        return "inf"
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (complex, np.complexfloating)):
        return complex_to_json(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


def dumps(obj) -> str:
    return json.dumps(to_jsonable(obj), indent=2, sort_keys=True)
