"""Command line front end.

Every subcommand reads one JSON object (standard input or ``--input``) and
writes one JSON report. Exit status is 0 on success, 2 for invalid input or a
violated hypothesis, 1 for a numerical failure; errors are reported as
``{"error": <code>, "message": ...}``.

Input objects::

    norm            {"space": S, "v": [...]}
    bj              {"space": S, "x": [...], "y": [...], "tol": t?}
    norm-op         {"operator": O}
    attain          {"operator": O}
    thm21           {"operator": O, "x": [...]}
    basis           {"operator": O}
    classify        {"operator": O}
    witness         {"operator": O}
    counterexample  {"space": S}                 (or --space)
    search-excon    {"space": S}                 (or --space)
    thm27           {"spaces": [S, ...], "euclidean_trials": n?}   (defaults if absent)

where ``S`` is a space object ``{"kind", "dim", "p", "gram", "vertices"}`` and
``O`` is ``{"matrix", "domain", "codomain"}``.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import space as sp
from .attain import check_attainment_conditions, norm_attainment_set, operator_from_dict, operator_norm
from .basis import compare_with_svd, greedy_orthogonal_basis, verify_orthogonality_on_basis
from .bjorth import bj_orthogonal
from .errors import NumericalFailure, OpGeomError, ValidationError
from .experiment import default_spaces, plane_experiment
from .extreme import classify, flat_segment_extreme, nonextreme_witness, search_extreme_nonisometry

SUBCOMMANDS = (
    "norm", "bj", "norm-op", "attain", "thm21", "basis", "classify",
    "witness", "counterexample", "search-excon", "thm27",
)


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    tol: float = 1e-8
    seed: int = 0
    method: str = "auto"
    output_format: str = "json"
    budget: int = 10_000
    verify: bool = False
    space: str | None = None
    input_path: str | None = None

    def __post_init__(self):
        if self.subcommand not in SUBCOMMANDS:
            raise ValidationError(f"unknown subcommand {self.subcommand!r}", code="unknown_subcommand")
        if not (self.tol > 0 and math.isfinite(self.tol)):
            raise ValidationError("--tol must be a positive number", code="invalid_tol")
        if self.output_format not in ("json", "text"):
            raise ValidationError("--format must be json or text", code="invalid_format")
        if self.budget < 1:
            raise ValidationError("--budget must be positive", code="invalid_budget")


def _vector(payload, key):
    if key not in payload:
        raise ValidationError(f"missing field {key!r}", code="missing_field")
    try:
        v = np.array(payload[key], dtype=float)
    except (TypeError, ValueError):
        raise ValidationError(f"{key!r} must be a list of numbers", code="dimension_mismatch") from None
    if v.ndim != 1:
        raise ValidationError(f"{key!r} must be a flat list of numbers", code="dimension_mismatch")
    return v


def _operator(payload):
    if "operator" not in payload:
        raise ValidationError("missing field 'operator'", code="missing_field")
    return operator_from_dict(payload["operator"])


def _space(config, payload):
    if config.space is not None:
        try:
            raw = json.loads(config.space)
        except json.JSONDecodeError as e:
            raise ValidationError(f"--space is not valid JSON: {e}", code="malformed_json") from None
        return sp.from_dict(raw)
    if "space" not in payload:
        raise ValidationError("missing field 'space'", code="missing_field")
    return sp.from_dict(payload["space"])


def _dispatch(config, payload):
    cmd, tol, seed = config.subcommand, config.tol, config.seed
    if cmd == "norm":
        space = _space(config, payload)
        return {"norm": sp.norm(space, _vector(payload, "v"))}
    if cmd == "bj":
        space = _space(config, payload)
        t = float(payload.get("tol", tol))
        return bj_orthogonal(space, _vector(payload, "x"), _vector(payload, "y"), t).to_dict()
    if cmd == "norm-op":
        return operator_norm(_operator(payload), config.method, seed).to_dict()
    if cmd == "attain":
        return norm_attainment_set(_operator(payload), tol, seed).to_dict()
    if cmd == "thm21":
        return check_attainment_conditions(_operator(payload), _vector(payload, "x"), tol).to_dict()
    if cmd == "basis":
        op = _operator(payload)
        res = greedy_orthogonal_basis(op, seed)
        out = res.to_dict()
        if config.verify:
            out["verified"] = verify_orthogonality_on_basis(op, res, tol)
            out["svd"] = compare_with_svd(op, res, tol)
        return out
    if cmd == "classify":
        return classify(_operator(payload), tol, seed).to_dict()
    if cmd == "witness":
        return nonextreme_witness(_operator(payload), tol, seed).to_dict()
    if cmd == "counterexample":
        return flat_segment_extreme(_space(config, payload), seed, tol).to_dict()
    if cmd == "search-excon":
        res = search_extreme_nonisometry(_space(config, payload), seed, config.budget, tol)
        if res is None:
            return {"found": False, "budget": config.budget,
                    "note": "nothing found within budget; this is not evidence of absence"}
        return res.to_dict()
    spaces = [sp.from_dict(s) for s in payload["spaces"]] if "spaces" in payload else default_spaces()
    trials = int(payload.get("euclidean_trials", 1000))
    return plane_experiment(spaces, seed, config.budget, trials, tol)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        if math.isinf(f):
            return "inf" if f > 0 else "-inf"
        return f
    return obj


def _text(obj, prefix=""):
    lines = []
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            key = f"{prefix}{k}"
            if isinstance(v, dict) or (isinstance(v, list) and v and isinstance(v[0], dict)):
                lines.extend(_text(v, key + "."))
            else:
                lines.append(f"{key}: {json.dumps(v)}")
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            lines.extend(_text(v, f"{prefix}{i}."))
    else:
        lines.append(f"{prefix.rstrip('.')}: {json.dumps(obj)}")
    return lines


def render(obj, output_format="json"):
    obj = _jsonable(obj)
    if output_format == "text":
        return ("\n".join(_text(obj)) + "\n").encode()
    return (json.dumps(obj, sort_keys=True, indent=2) + "\n").encode()


def run(config, data=b""):
    """Execute one subcommand on raw input bytes; returns ``(exit_code, output)``."""
    fmt = getattr(config, "output_format", "json")
    try:
        text = data.decode() if isinstance(data, (bytes, bytearray)) else str(data)
        if text.strip():
            try:
                payload = json.loads(text)
            except json.JSONDecodeError as e:
                raise ValidationError(f"input is not valid JSON: {e}", code="malformed_json") from None
            if not isinstance(payload, dict):
                raise ValidationError("input must be a JSON object", code="malformed_json")
        else:
            payload = {}
        return 0, render(_dispatch(config, payload), fmt)
    except NumericalFailure as e:
        return 1, render({"error": e.code, "message": str(e)}, fmt)
    except OpGeomError as e:
        return 2, render({"error": e.code, "message": str(e)}, fmt)
    except (KeyError, TypeError, ValueError) as e:
        return 2, render({"error": "invalid_input", "message": str(e)}, fmt)
    except (np.linalg.LinAlgError, FloatingPointError) as e:
        return 1, render({"error": "numerical_failure", "message": str(e)}, fmt)


def build_parser():
    parser = argparse.ArgumentParser(prog="opgeom", description=__doc__.split("\n\n")[0])
    parser.add_argument("subcommand", choices=SUBCOMMANDS)
    parser.add_argument("--input", dest="input_path", help="read JSON from this file instead of stdin")
    parser.add_argument("--tol", type=float, default=1e-8)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--method", default="auto", choices=("auto", "spectral", "vertex", "multistart"))
    parser.add_argument("--format", dest="output_format", default="json", choices=("json", "text"))
    parser.add_argument("--budget", type=int, default=10_000)
    parser.add_argument("--verify", action="store_true", help="basis: include orthogonality and SVD checks")
    parser.add_argument("--space", help="space as a JSON object (counterexample, search-excon)")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        config = RunConfig(**vars(args))
    except OpGeomError as e:
        sys.stdout.buffer.write(render({"error": e.code, "message": str(e)}, args.output_format))
        return 2
    if config.input_path:
        with open(config.input_path, "rb") as fh:
            data = fh.read()
    elif config.space is not None or (config.subcommand == "thm27" and sys.stdin.isatty()):
        data = b""
    else:
        data = sys.stdin.buffer.read()
    code, out = run(config, data)
    sys.stdout.buffer.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
