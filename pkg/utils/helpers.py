# utils/helpers.py
import hashlib
import json
import math
from pathlib import Path
from typing import Any, Dict, Iterable, List, Union

import yaml

from src.errors import ConfigError


def load_yaml(path: Union[str, Path]) -> Dict[str, Any]:
    """Load a YAML mapping, raising ConfigError for a missing or malformed file"""
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"Config file not found: {path}")
    try:
        with path.open("r") as f:
            data = yaml.safe_load(f)
    except yaml.YAMLError as e:
        raise ConfigError(f"Could not parse {path}: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"{path} must contain a mapping at the top level")
    return data


def canonical_json(record: Dict[str, Any]) -> str:
    """One-line JSON with sorted keys; non-finite floats become null"""
    return json.dumps(_finite(record), sort_keys=True, separators=(",", ":"))


def _finite(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _finite(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_finite(v) for v in value]
    return value


def append_jsonl(path: Union[str, Path], records: Iterable[Dict[str, Any]]) -> None:
    with Path(path).open("a") as f:
        for record in records:
            f.write(canonical_json(record) + "\n")
            f.flush()


def drop_torn_tail(path: Union[str, Path]) -> bool:
    """Truncate an unterminated last line left by an interrupted writer"""
    path = Path(path)
    if not path.exists():
        return False
    data = path.read_bytes()
    if not data or data.endswith(b"\n"):
        return False
    path.write_bytes(data[: data.rfind(b"\n") + 1])
    return True


def read_jsonl(path: Union[str, Path]) -> List[Dict[str, Any]]:
    """Records of a JSON-lines file; a torn last line from an interrupted run is ignored"""
    path = Path(path)
    if not path.exists():
        return []
    records = []
    with path.open("r") as f:
        lines = f.read().splitlines()
    for number, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            records.append(json.loads(line))
        except json.JSONDecodeError:
            if number == len(lines):
                break
            raise ConfigError(f"{path}:{number} is not valid JSON")
    return records


def parse_assignments(tokens: Iterable[str]) -> Dict[str, Union[int, float, str]]:
    """['r=0.5', 'd=2'] -> {'r': 0.5, 'd': 2}"""
    parsed = {}
    for token in tokens:
        key, sep, raw = token.partition("=")
        if not sep or not key:
            raise ConfigError(f"Expected key=value, got '{token}'")
        parsed[key] = _number(raw)
    return parsed


def _number(raw: str) -> Union[int, float, str]:
    for cast in (int, float):
        try:
            return cast(raw)
        except ValueError:
            continue
    return raw


def stable_seed(*parts: Any) -> int:
    """63-bit seed derived from the parts' text, identical across processes and platforms"""
    digest = hashlib.sha256("|".join(str(p) for p in parts).encode()).digest()
    return int.from_bytes(digest[:8], "big") >> 1
