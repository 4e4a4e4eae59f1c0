"""Reading SOC descriptions: ITC'02 ``.soc`` files, the native ``.core`` format and power files."""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from importlib import resources
from typing import Dict, List, Optional, Sequence, Tuple


class BenchmarkError(ValueError):
    """Base class for input errors."""


class ParseError(BenchmarkError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class DesignValidationError(BenchmarkError):
    pass


@dataclass(frozen=True)
class CoreSpec:
    id: int
    num_inputs: int = 0
    num_outputs: int = 0
    num_bidirs: int = 0
    scan_chain_lengths: Tuple[int, ...] = ()
    num_patterns: int = 1
    power_mw: int = 0

    def __post_init__(self):
        object.__setattr__(self, "scan_chain_lengths", tuple(self.scan_chain_lengths))
        self.validate()

    def validate(self) -> None:
        if self.id < 1:
            raise DesignValidationError(f"core id must be positive, got {self.id}")
        for name in ("num_inputs", "num_outputs", "num_bidirs", "power_mw"):
            if getattr(self, name) < 0:
                raise DesignValidationError(f"core {self.id}: {name} is negative ({getattr(self, name)})")
        if self.num_patterns < 1:
            raise DesignValidationError(f"core {self.id}: num_patterns must be >= 1, got {self.num_patterns}")
        for length in self.scan_chain_lengths:
            if length < 1:
                raise DesignValidationError(f"core {self.id}: scan chain length must be positive, got {length}")

    @property
    def is_combinational(self) -> bool:
        return not self.scan_chain_lengths

    @property
    def terminal_cells(self) -> int:
        """Wrapper cells needed for the functional terminals (a bidir needs an input and an output cell)."""
        return self.num_inputs + self.num_outputs + 2 * self.num_bidirs


@dataclass(frozen=True)
class SocDesign:
    name: str
    cores: Tuple[CoreSpec, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "cores", tuple(self.cores))
        seen = set()
        for core in self.cores:
            if core.id in seen:
                raise DesignValidationError(f"duplicate core id {core.id}")
            seen.add(core.id)

    def core(self, core_id: int) -> CoreSpec:
        for c in self.cores:
            if c.id == core_id:
                return c
        raise KeyError(f"unknown core {core_id}")

    @property
    def core_ids(self) -> List[int]:
        return [c.id for c in self.cores]

    def with_power(self, power: Dict[int, int]) -> "SocDesign":
        unknown = sorted(set(power) - set(self.core_ids))
        if unknown:
            raise DesignValidationError("unknown core " + ", ".join(str(i) for i in unknown))
        return SocDesign(self.name, [replace(c, power_mw=power.get(c.id, 0)) for c in self.cores])


def _int(token: str, lineno: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(lineno, f"expected integer for {what}, got {token!r}") from None


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].strip()


# ---------------------------------------------------------------------------
# ITC'02

_QUOTED = re.compile(r"'[^']*'|\"[^\"]*\"")


def parse_itc02(text: str) -> SocDesign:
    """Parse an ITC'02 SOC benchmark file.

    Only the fields relevant to wrapper design are kept. A module becomes a
    core when it carries at least one test; the pattern counts of all its
    tests are summed. Hierarchy (``Level``) is flattened.
    """
    name = ""
    modules: Dict[int, dict] = {}
    order: List[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw)
        if not line:
            continue
        if line.split()[0] == "SocName":
            value = line[len("SocName"):].strip().strip("'\"").strip()
            if not value:
                raise ParseError(lineno, "SocName without a value")
            name = value
            continue
        tokens = _QUOTED.sub(" ", line).split()
        key = tokens[0]
        if key != "Module":
            # TotalModules, Options and other header records carry nothing we use
            continue
        if len(tokens) < 2:
            raise ParseError(lineno, "Module record without an id")
        mid = _int(tokens[1], lineno, "module id")
        if mid not in modules:
            modules[mid] = {"inputs": 0, "outputs": 0, "bidirs": 0, "scan": [], "patterns": 0, "tests": 0}
            order.append(mid)
        _parse_module_fields(tokens[2:], modules[mid], lineno)

    cores = []
    for mid in order:
        m = modules[mid]
        if m["tests"] == 0 or m["patterns"] == 0:
            continue
        for k in ("inputs", "outputs", "bidirs"):
            if m[k] < 0:
                raise DesignValidationError(f"module {mid}: negative {k} ({m[k]})")
        cores.append(
            CoreSpec(
                id=mid,
                num_inputs=m["inputs"],
                num_outputs=m["outputs"],
                num_bidirs=m["bidirs"],
                scan_chain_lengths=tuple(m["scan"]),
                num_patterns=m["patterns"],
            )
        )
    return SocDesign(name, cores)


def _parse_module_fields(tokens: Sequence[str], module: dict, lineno: int) -> None:
    i = 0
    in_test = False
    while i < len(tokens):
        key = tokens[i]
        if key == ":":
            i += 1
            continue
        if key == "ScanChains":
            if i + 1 >= len(tokens):
                raise ParseError(lineno, "ScanChains without a count")
            count = _int(tokens[i + 1], lineno, "ScanChains")
            if count < 0:
                raise DesignValidationError(f"line {lineno}: negative scan chain count")
            j = i + 2
            if j < len(tokens) and tokens[j] == ":":
                j += 1
            lengths = tokens[j:j + count]
            if len(lengths) != count:
                raise ParseError(lineno, f"expected {count} scan chain lengths, found {len(lengths)}")
            module["scan"] = [_int(t, lineno, "scan chain length") for t in lengths]
            if any(v <= 0 for v in module["scan"]):
                raise DesignValidationError(f"line {lineno}: scan chain lengths must be positive")
            i = j + count
            continue
        if i + 1 >= len(tokens):
            raise ParseError(lineno, f"field {key!r} has no value")
        value = tokens[i + 1]
        if key == "Test":
            in_test = True
            module["tests"] += 1
        elif key == "Inputs":
            module["inputs"] = _int(value, lineno, key)
        elif key == "Outputs":
            module["outputs"] = _int(value, lineno, key)
        elif key == "Bidirs":
            module["bidirs"] = _int(value, lineno, key)
        elif key == "Patterns" and in_test:
            n = _int(value, lineno, key)
            if n < 0:
                raise DesignValidationError(f"line {lineno}: negative pattern count")
            module["patterns"] += n
        i += 2


# ---------------------------------------------------------------------------
# native format

_NATIVE_KEYS = ("inputs", "outputs", "bidirs", "scan", "patterns", "power")


def parse_native(text: str) -> SocDesign:
    """Parse the line-oriented native format (``soc``/``core`` blocks)."""
    name = ""
    blocks: List[Tuple[int, int, dict]] = []
    current: Optional[dict] = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw)
        if not line:
            continue
        key, *values = line.split()
        if key == "soc":
            name = " ".join(values)
            continue
        if key == "core":
            if len(values) != 1:
                raise ParseError(lineno, "core line takes exactly one id")
            current = {}
            blocks.append((lineno, _int(values[0], lineno, "core id"), current))
            continue
        if key not in _NATIVE_KEYS:
            raise ParseError(lineno, f"unknown key {key!r}")
        if current is None:
            raise ParseError(lineno, f"{key!r} outside a core block")
        if key in current:
            raise ParseError(lineno, f"duplicate key {key!r}")
        if key == "scan":
            current[key] = tuple(_int(v, lineno, "scan chain length") for v in values)
        else:
            if len(values) != 1:
                raise ParseError(lineno, f"{key!r} takes exactly one value")
            current[key] = _int(values[0], lineno, key)

    cores = []
    for lineno, cid, fields in blocks:
        if "patterns" not in fields:
            raise ParseError(lineno, f"core {cid} has no patterns line")
        cores.append(
            CoreSpec(
                id=cid,
                num_inputs=fields.get("inputs", 0),
                num_outputs=fields.get("outputs", 0),
                num_bidirs=fields.get("bidirs", 0),
                scan_chain_lengths=fields.get("scan", ()),
                num_patterns=fields["patterns"],
                power_mw=fields.get("power", 0),
            )
        )
    return SocDesign(name, cores)


def serialize_native(design: SocDesign) -> str:
    lines = []
    if design.name:
        lines.append(f"soc {design.name}")
    for c in design.cores:
        lines += [
            f"core {c.id}",
            f"inputs {c.num_inputs}",
            f"outputs {c.num_outputs}",
            f"bidirs {c.num_bidirs}",
            "scan " + " ".join(str(v) for v in c.scan_chain_lengths) if c.scan_chain_lengths else "scan",
            f"patterns {c.num_patterns}",
            f"power {c.power_mw}",
        ]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# power + loading


def parse_power_file(text: str) -> Dict[int, int]:
    power: Dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw)
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(lineno, "expected 'core_id power_mw'")
        cid = _int(parts[0], lineno, "core id")
        mw = _int(parts[1], lineno, "power")
        if mw < 0:
            raise DesignValidationError(f"line {lineno}: negative power {mw}")
        if cid in power:
            raise ParseError(lineno, f"duplicate core id {cid}")
        power[cid] = mw
    return power


def looks_like_itc02(text: str) -> bool:
    for raw in text.splitlines():
        line = _strip_comment(raw)
        if line:
            return line.split()[0] in ("SocName", "TotalModules", "Options", "Module")
    return False


def parse_design(text: str) -> SocDesign:
    return parse_itc02(text) if looks_like_itc02(text) else parse_native(text)


def load_design(design_text: str, power_text: Optional[str] = None) -> SocDesign:
    design = parse_design(design_text)
    if power_text is None:
        return design
    return design.with_power(parse_power_file(power_text))


def bundled_text(filename: str) -> str:
    """Text of one of the benchmark files shipped in ``soctam/data``."""
    return resources.files("soctam").joinpath("data", filename).read_text(encoding="utf-8")


def bundled_d695(with_power: bool = True) -> SocDesign:
    return load_design(bundled_text("d695.soc"), bundled_text("d695.power") if with_power else None)


def bundled_p93791_core6() -> SocDesign:
    return load_design(bundled_text("p93791_core6.soc"))
