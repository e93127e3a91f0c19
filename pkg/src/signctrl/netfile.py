"""JSON network files.

Layout::

    {
      "description": "...",                       optional
      "n": 5,
      "edges": [{"i": 1, "j": 2, "sign": "+", "weight": 2.0}, ...],
      "inputs": [{"input_index": 1, "state": 3}, ...],
      "diagonal_signs": ["-", "-", ...],          optional
      "labels": ["1", "2", ..., "u1", ...]        optional, states then inputs
    }

Weights are optional but, when present, must be given on every edge.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import NetworkError
from .graph import Sign, SignedNetwork

KEYS = {"description", "n", "edges", "inputs", "diagonal_signs", "labels"}
EDGE_KEYS = {"i", "j", "sign", "weight"}
INPUT_KEYS = {"input_index", "state"}


class NetworkFileError(NetworkError):
    def __init__(self, message: str, field: str | None = None, source: str | None = None,
                 line: int | None = None, column: int | None = None):
        self.field = field
        self.source = source
        self.line = line
        self.column = column
        where = source or "<network>"
        if line is not None:
            where += f":{line}:{column}"
        if field:
            where += f": {field}"
        super().__init__(f"{where}: {message}")


@dataclass(frozen=True)
class NetworkFile:
    network: SignedNetwork
    description: str = ""


def _int(value, field, source, lo=None, hi=None):
    if isinstance(value, bool) or not isinstance(value, int):
        raise NetworkFileError(f"expected an integer, got {value!r}", field, source)
    if (lo is not None and value < lo) or (hi is not None and value > hi):
        raise NetworkFileError(f"{value} is outside {lo}..{hi}", field, source)
    return value


def _list(doc, key, source, required=True):
    value = doc.get(key)
    if value is None:
        if required:
            raise NetworkFileError("missing required field", key, source)
        return None
    if not isinstance(value, list):
        raise NetworkFileError(f"expected a list, got {type(value).__name__}", key, source)
    return value


def _unknown(obj, allowed, field, source):
    extra = sorted(set(obj) - allowed)
    if extra:
        raise NetworkFileError(f"unknown keys {extra}", field, source)


def _sign(value, field, source):
    if value not in ("+", "-"):
        raise NetworkFileError(f"invalid sign {value!r}; expected '+' or '-'", field, source)
    return Sign.parse(value)


def from_dict(doc, source: str | None = None) -> NetworkFile:
    if not isinstance(doc, dict):
        raise NetworkFileError("top level must be an object", None, source)
    _unknown(doc, KEYS, None, source)
    n = _int(doc.get("n"), "n", source, lo=1)

    signs = {}
    weights = {}
    for idx, e in enumerate(_list(doc, "edges", source)):
        at = f"edges[{idx}]"
        if not isinstance(e, dict):
            raise NetworkFileError("expected an object", at, source)
        _unknown(e, EDGE_KEYS, at, source)
        for key in ("i", "j", "sign"):
            if key not in e:
                raise NetworkFileError("missing required field", f"{at}.{key}", source)
        i = _int(e["i"], f"{at}.i", source, 1, n)
        j = _int(e["j"], f"{at}.j", source, 1, n)
        if i >= j:
            raise NetworkFileError(f"expected i < j, got ({i}, {j})", at, source)
        if (i, j) in signs:
            raise NetworkFileError(f"duplicate edge ({i}, {j})", at, source)
        signs[(i, j)] = _sign(e["sign"], f"{at}.sign", source)
        if "weight" in e:
            w = e["weight"]
            if isinstance(w, bool) or not isinstance(w, (int, float)) or w == 0:
                raise NetworkFileError(f"expected a nonzero number, got {w!r}", f"{at}.weight", source)
            if Sign.of(w) != signs[(i, j)]:
                raise NetworkFileError(f"weight {w} disagrees with sign {e['sign']!r}", f"{at}.weight", source)
            weights[(i, j)] = float(w)
    if weights and len(weights) != len(signs):
        missing = next(idx for idx, key in enumerate(signs) if key not in weights)
        raise NetworkFileError("weights must be given on every edge or on none", f"edges[{missing}].weight", source)

    targets = {}
    for idx, u in enumerate(_list(doc, "inputs", source)):
        at = f"inputs[{idx}]"
        if not isinstance(u, dict):
            raise NetworkFileError("expected an object", at, source)
        _unknown(u, INPUT_KEYS, at, source)
        for key in INPUT_KEYS:
            if key not in u:
                raise NetworkFileError("missing required field", f"{at}.{key}", source)
        k = _int(u["input_index"], f"{at}.input_index", source, lo=1)
        if k in targets:
            raise NetworkFileError(f"duplicate input index {k}", f"{at}.input_index", source)
        s = _int(u["state"], f"{at}.state", source, 1, n)
        if s in targets.values():
            raise NetworkFileError(f"state {s} already driven by another input", f"{at}.state", source)
        targets[k] = s
    if sorted(targets) != list(range(1, len(targets) + 1)):
        raise NetworkFileError(f"input indices {sorted(targets)} must be 1..{len(targets)}", "inputs", source)

    diag = _list(doc, "diagonal_signs", source, required=False)
    if diag is not None:
        if len(diag) != n:
            raise NetworkFileError(f"expected {n} entries, got {len(diag)}", "diagonal_signs", source)
        diag = tuple(_sign(s, f"diagonal_signs[{i}]", source) for i, s in enumerate(diag))

    labels = _list(doc, "labels", source, required=False)
    if labels is not None:
        for i, x in enumerate(labels):
            if not isinstance(x, str) or not x:
                raise NetworkFileError(f"expected a nonempty string, got {x!r}", f"labels[{i}]", source)

    description = doc.get("description", "")
    if not isinstance(description, str):
        raise NetworkFileError("expected a string", "description", source)

    try:
        net = SignedNetwork(
            n, signs, tuple(targets[k] for k in sorted(targets)),
            diagonal_signs=diag,
            nominal_weights=weights or None,
            labels=tuple(labels) if labels is not None else None,
        )
    except NetworkError as exc:
        raise NetworkFileError(str(exc), None, source) from None
    return NetworkFile(net, description)


def loads(text: str, source: str | None = None) -> NetworkFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise NetworkFileError(exc.msg, None, source, exc.lineno, exc.colno) from None
    return from_dict(doc, source)


def load(path) -> NetworkFile:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise NetworkFileError(exc.strerror or str(exc), None, str(path)) from None
    return loads(text, str(path))


def to_dict(nf: NetworkFile | SignedNetwork) -> dict:
    if isinstance(nf, SignedNetwork):
        nf = NetworkFile(nf)
    net = nf.network
    doc: dict = {}
    if nf.description:
        doc["description"] = nf.description
    doc["n"] = net.n
    edges = []
    for (i, j), s in net.state_edge_signs.items():
        if s == Sign.ZERO:
            continue
        e = {"i": i, "j": j, "sign": s.symbol}
        if net.nominal_weights is not None:
            e["weight"] = net.nominal_weights[(i, j)]
        edges.append(e)
    doc["edges"] = edges
    doc["inputs"] = [{"input_index": k, "state": s} for k, s in enumerate(net.input_assignment, start=1)]
    if net.diagonal_signs is not None:
        doc["diagonal_signs"] = [s.symbol for s in net.diagonal_signs]
    if net.labels is not None:
        doc["labels"] = list(net.labels)
    return doc


def dumps(nf: NetworkFile | SignedNetwork) -> str:
    return json.dumps(to_dict(nf), indent=2) + "\n"


def dump(nf: NetworkFile | SignedNetwork, path) -> None:
    Path(path).write_text(dumps(nf), encoding="utf-8")


def fixture_names() -> list[str]:
    return sorted(p.name[:-5] for p in resources.files("signctrl").joinpath("fixtures").iterdir()
                  if p.name.endswith(".json"))


def load_fixture(name: str) -> NetworkFile:
    """One of the bundled example networks, e.g. ``load_fixture("fig1")``."""
    ref = resources.files("signctrl").joinpath("fixtures", f"{name}.json")
    if not ref.is_file():
        raise NetworkFileError(f"no bundled fixture {name!r}; known: {fixture_names()}")
    return loads(ref.read_text(encoding="utf-8"), f"fixtures/{name}.json")


def schema(name: str) -> dict:
    """Bundled JSON schema, ``"network"`` or ``"report"``."""
    return json.loads(resources.files("signctrl").joinpath("schemas", f"{name}.schema.json").read_text())
