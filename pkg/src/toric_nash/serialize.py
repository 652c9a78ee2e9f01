"""JSON forms of cones and canonical JSON output."""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path
from typing import Any

from .cone import Cone
from .errors import ValidationError

SCHEMA_VERSION = "1"
_JSON_SAFE = 2**53 - 1


def cone_to_dict(c: Cone) -> dict:
    return {"lattice_rank": c.ambient_rank, "rays": [list(r) for r in c.rays]}


def cone_from_dict(data: Any) -> Cone:
    if not isinstance(data, dict) or "rays" not in data:
        raise ValidationError('cone JSON must be an object with "lattice_rank" and "rays"')
    rays = [[_int_from_json(x) for x in r] for r in data["rays"]]
    n = data.get("lattice_rank")
    if n is None:
        raise ValidationError('cone JSON is missing "lattice_rank"')
    n = _int_from_json(n)
    for r in rays:
        if len(r) != n:
            raise ValidationError(f"rank mismatch: ray {r} has length {len(r)}, lattice_rank is {n}")
    return Cone(rays, n)


def _int_from_json(x: Any) -> int:
    if isinstance(x, bool):
        raise ValidationError(f"expected an integer, got {x!r}")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            return int(x)
        except ValueError:
            pass
    raise ValidationError(f"expected an integer, got {x!r}")


def _protect(obj: Any) -> Any:
    # integers beyond 2^53 - 1 lose precision in many JSON consumers
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, int):
        return str(obj) if abs(obj) > _JSON_SAFE else obj
    if isinstance(obj, dict):
        return {str(k): _protect(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_protect(v) for v in obj]
    return obj


def canonical_json(obj: Any) -> str:
    """Deterministic JSON text: sorted keys, fixed separators, trailing newline."""
    return json.dumps(_protect(obj), sort_keys=True, indent=2, separators=(",", ": "), ensure_ascii=False) + "\n"


def write_atomic(path: str | os.PathLike[str], text: str) -> None:
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=target.parent or ".", prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise
