"""Job files: one JSON document describing an algebra, modules and a command."""

import json
from dataclasses import dataclass

from nca.errors import ParseError
from nca.freealg import make_algebra, parse
from nca.grmod import GradedModulePresentation, augmentation_ideal, free_module, simple_module
from nca.linalg import DEFAULT_PRIME
from nca.regularity import DualityDatum

COMMANDS = (
    "gb",
    "hilbert",
    "betti",
    "reg",
    "koszul",
    "truncate-verify",
    "cmreg",
    "inequalities",
    "left-right-k",
)
KNOWN_ASSERTIONS = ("noetherian", "balanced-dualizing-complex", "koszul")
BUILTIN_MODULES = ("k", "A", "m")


@dataclass
class Job:
    algebra: object
    modules: dict
    command: str
    h: int
    D: int
    module: object
    s_range: object
    duality: object
    raw: dict

    def get_module(self, name=None):
        name = self.module if name is None else name
        if name is None:
            name = "k"
        if name in self.modules:
            return self.modules[name]
        if name == "k":
            return simple_module(self.algebra)
        if name == "A":
            return free_module(self.algebra)
        if name == "m":
            return augmentation_ideal(self.algebra, self.D)
        raise ParseError(f"unknown module {name!r}")


def _locate(text, needle):
    """1-based (line, column) of the JSON string literal ``needle`` in ``text``."""
    lit = json.dumps(needle)
    pos = text.find(lit)
    if pos < 0:
        return None, None
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


def _set_path(data, dotted, value):
    keys = dotted.split(".")
    cur = data
    for k in keys[:-1]:
        if not isinstance(cur.get(k), dict):
            cur[k] = {}
        cur = cur[k]
    cur[keys[-1]] = value


def apply_overrides(data, overrides):
    for item in overrides or ():
        if "=" not in item:
            raise ParseError(f"override {item!r} must look like key=value")
        key, val = item.split("=", 1)
        try:
            parsed = json.loads(val)
        except json.JSONDecodeError:
            parsed = val
        _set_path(data, key.strip(), parsed)
    return data


def _req(block, key, kind, where):
    if key not in block:
        raise ParseError(f"missing required key {where}.{key}")
    v = block[key]
    if kind is int and (isinstance(v, bool) or not isinstance(v, int)):
        raise ParseError(f"{where}.{key} must be an integer")
    if kind is not int and not isinstance(v, kind):
        raise ParseError(f"{where}.{key} has the wrong type")
    return v


def _parse_rel(text, rel, names, p, degrees):
    try:
        return parse(rel, names, p, degrees)
    except ParseError as exc:
        line, col = _locate(text, rel)
        if line is not None and exc.column is not None:
            raise ParseError(f"in relation {rel!r}: {exc.reason}", line, col + exc.column) from None
        raise


def load_job_text(text, overrides=()):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    if not isinstance(data, dict):
        raise ParseError("job file must be a JSON object")
    apply_overrides(data, overrides)
    for key in ("algebra", "command"):
        if not isinstance(data.get(key), dict):
            raise ParseError(f"missing required block {key!r}")
    p = (data.get("field") or {}).get("p", DEFAULT_PRIME)
    alg = data["algebra"]
    gens = _req(alg, "generators", list, "algebra")
    names, degrees = [], []
    for g in gens:
        if not isinstance(g, dict) or "name" not in g:
            raise ParseError("each generator needs a name")
        names.append(g["name"])
        degrees.append(g.get("degree", 1))
    rels = [_parse_rel(text, r, names, p, degrees) for r in alg.get("relations", [])]
    assertions = tuple(alg.get("assertions") or ())
    for a in assertions:
        if a not in KNOWN_ASSERTIONS:
            raise ParseError(f"unknown assertion {a!r}; known: {', '.join(KNOWN_ASSERTIONS)}")
    try:
        A = make_algebra(names, rels, degrees, alg.get("order"), p, assertions)
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    dual = alg.get("duality")
    duality = None
    if dual is not None:
        duality = DualityDatum(_req(dual, "d", int, "algebra.duality"), _req(dual, "l", int, "algebra.duality"))

    modules = {}
    for name, block in (data.get("modules") or {}).items():
        gd = _req(block, "generators", list, f"modules.{name}")
        rows = []
        for r in block.get("relations", []):
            if len(r) != len(gd):
                raise ParseError(f"module {name!r}: relation {r!r} needs {len(gd)} components")
            rows.append(tuple(_parse_rel(text, s, names, p, None) for s in r))
        try:
            modules[name] = GradedModulePresentation(A, tuple(gd), tuple(rows))
        except ValueError as exc:
            raise ParseError(f"module {name!r}: {exc}") from None

    cmd = data["command"]
    name = _req(cmd, "name", str, "command")
    if name not in COMMANDS:
        raise ParseError(f"unknown command {name!r}; expected one of {', '.join(COMMANDS)}")
    h = _req(cmd, "h", int, "command")
    D = _req(cmd, "D", int, "command")
    if h < 0 or D < 1:
        raise ParseError("windows must be positive (h >= 0, D >= 1)")
    module = cmd.get("module")
    if module is not None and module not in modules and module not in BUILTIN_MODULES:
        raise ParseError(f"command.module {module!r} is not defined in the modules block")
    s_range = cmd.get("s_range")
    if s_range is not None:
        if not (isinstance(s_range, list) and len(s_range) == 2 and all(isinstance(v, int) for v in s_range)):
            raise ParseError("command.s_range must be [s_min, s_max]")
        s_range = tuple(s_range)
    return Job(A, modules, name, h, D, module, s_range, duality, data)


def load_job(path, overrides=()):
    with open(path, encoding="utf-8") as fh:
        return load_job_text(fh.read(), overrides)
