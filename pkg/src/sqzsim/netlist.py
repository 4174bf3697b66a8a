"""Parser, validator, and serializer for the optical-chain netlist format.

The format is line oriented: one component declaration, chain directive,
or signal directive per line, with '#' comments.

    # squeezer -> filter cavity -> recycling cavity -> readout
    opa sqz pump_x=0.33 bandwidth=20MHz escape=0.90
    cavity fc length=1.21m r_in=0.90 r_end=0.9992 detuning=-10MHz
    homodyne hd angle=0 qe=0.93
    chain sqz -> fc -> hd
    signal node=fc amplitude=1

Component kinds and attributes:

    opa       pump_x, bandwidth, escape
    cavity    length, r_in, r_end, detuning, loss_rt (optional)
    loss      eta
    homodyne  angle, qe

Accepted unit suffixes: Hz/kHz/MHz/GHz, m/mm, deg (stored as radians).
Plain numbers are SI (Hz, m, rad) or dimensionless fractions; dB is not a
netlist unit - all losses are power fractions.  Positive cavity detuning
means the lock sits at the upper sideband.

parse() is total: it never raises on text input, it reports diagnostics
with line and column.  A document is produced only when there are no
error-severity diagnostics.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

from .components import CavitySpec, LossSpec, OpaSpec
from .experiment import Pipeline, PipelineStage, SignalSpec
from .twophoton import HomodyneSpec

__all__ = [
    "ParseDiagnostic",
    "ComponentDecl",
    "SignalDecl",
    "NetlistDocument",
    "ParseResult",
    "ValidationResult",
    "parse",
    "validate",
    "serialize",
]

_FREQ, _LEN, _ANGLE, _PLAIN = "frequency", "length", "angle", "plain"

_UNITS: dict[str, tuple[str, float]] = {
    "Hz": (_FREQ, 1.0),
    "kHz": (_FREQ, 1e3),
    "MHz": (_FREQ, 1e6),
    "GHz": (_FREQ, 1e9),
    "m": (_LEN, 1.0),
    "mm": (_LEN, 1e-3),
    "deg": (_ANGLE, math.pi / 180.0),
}


def _check_fraction(v: float) -> str | None:
    return None if 0.0 <= v <= 1.0 else "must be in [0, 1]"


def _check_pump(v: float) -> str | None:
    return None if 0.0 <= v < 1.0 else "must be in [0, 1) (below threshold)"


def _check_positive(v: float) -> str | None:
    return None if v > 0.0 else "must be positive"


def _check_any(v: float) -> str | None:
    return None


def _check_nonnegative(v: float) -> str | None:
    return None if v >= 0.0 else "must be >= 0"


# attribute -> (dimension, required, range check)
_KIND_ATTRS: dict[str, dict[str, tuple[str, bool, object]]] = {
    "opa": {
        "pump_x": (_PLAIN, True, _check_pump),
        "bandwidth": (_FREQ, True, _check_positive),
        "escape": (_PLAIN, True, _check_fraction),
    },
    "cavity": {
        "length": (_LEN, True, _check_positive),
        "r_in": (_PLAIN, True, _check_fraction),
        "r_end": (_PLAIN, True, _check_fraction),
        "detuning": (_FREQ, True, _check_any),
        "loss_rt": (_PLAIN, False, _check_fraction),
    },
    "loss": {
        "eta": (_PLAIN, True, _check_fraction),
    },
    "homodyne": {
        "angle": (_ANGLE, True, _check_any),
        "qe": (_PLAIN, True, _check_fraction),
    },
}


@dataclass(frozen=True)
class ParseDiagnostic:
    line: int
    column: int
    severity: str  # "error" | "warning"
    message: str


@dataclass(frozen=True)
class ComponentDecl:
    kind: str
    name: str
    attributes: dict[str, float]
    line: int = field(default=0, compare=False)
    column: int = field(default=1, compare=False)


@dataclass(frozen=True)
class SignalDecl:
    node: str
    amplitude: float
    line: int = field(default=0, compare=False)
    column: int = field(default=1, compare=False)


@dataclass(frozen=True)
class NetlistDocument:
    components: tuple[ComponentDecl, ...]
    chain: tuple[str, ...] = ()
    signal: SignalDecl | None = None
    chain_line: int = field(default=0, compare=False)

    def component(self, name: str) -> ComponentDecl | None:
        for comp in self.components:
            if comp.name == name:
                return comp
        return None


@dataclass(frozen=True)
class ParseResult:
    document: NetlistDocument | None
    diagnostics: tuple[ParseDiagnostic, ...]

    @property
    def ok(self) -> bool:
        return self.document is not None


@dataclass(frozen=True)
class ValidationResult:
    pipeline: Pipeline | None
    diagnostics: tuple[ParseDiagnostic, ...]

    @property
    def ok(self) -> bool:
        return self.pipeline is not None


_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r]+)"
    r"|(?P<arrow>->)"
    r"|(?P<number>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<eq>=)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<junk>\S)"
)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    column: int  # 1-based


def _scan(text: str) -> tuple[list[_Token], list[int]]:
    """Tokenize one line; returns tokens and columns of junk characters."""
    tokens: list[_Token] = []
    junk: list[int] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:  # pragma: no cover - regex matches any non-empty input
            junk.append(pos + 1)
            pos += 1
            continue
        kind = m.lastgroup
        if kind == "junk":
            junk.append(m.start() + 1)
        elif kind != "ws":
            tokens.append(_Token(kind, m.group(), m.start() + 1))
        pos = m.end()
    return tokens, junk


class _LineParser:
    """Consumes the token stream of one line, collecting diagnostics."""

    def __init__(self, line_no: int, tokens: list[_Token], diags: list[ParseDiagnostic]):
        self.line_no = line_no
        self.tokens = tokens
        self.pos = 0
        self.diags = diags
        self.failed = False

    def peek(self, offset: int = 0) -> _Token | None:
        index = self.pos + offset
        return self.tokens[index] if index < len(self.tokens) else None

    def take(self) -> _Token | None:
        tok = self.peek()
        if tok is not None:
            self.pos += 1
        return tok

    def error(self, message: str, column: int | None = None) -> None:
        if column is None:
            tok = self.peek()
            column = tok.column if tok else (self.tokens[-1].column if self.tokens else 1)
        self.diags.append(ParseDiagnostic(self.line_no, column, "error", message))
        self.failed = True

    def expect_ident(self, what: str) -> _Token | None:
        tok = self.peek()
        if tok is None or tok.kind != "ident":
            self.error(f"expected {what}")
            return None
        return self.take()

    def parse_attributes(self, kind: str) -> dict[str, float]:
        """key=value list for a component declaration of the given kind."""
        schema = _KIND_ATTRS[kind]
        attrs: dict[str, float] = {}
        while self.peek() is not None:
            key_tok = self.expect_ident("attribute name")
            if key_tok is None:
                break
            eq = self.peek()
            if eq is None or eq.kind != "eq":
                self.error(f"expected '=' after attribute {key_tok.text!r}")
                break
            self.take()
            if key_tok.text not in schema:
                self.error(
                    f"unknown-attribute: {kind!r} has no attribute {key_tok.text!r}",
                    key_tok.column,
                )
                self._skip_value()
                continue
            dimension = schema[key_tok.text][0]
            value = self._parse_value(key_tok.text, dimension)
            if value is None:
                continue
            if key_tok.text in attrs:
                self.error(
                    f"duplicate-attribute: {key_tok.text!r} given twice",
                    key_tok.column,
                )
                continue
            attrs[key_tok.text] = value
        return attrs

    def _skip_value(self) -> None:
        tok = self.peek()
        if tok is not None and tok.kind == "number":
            self.take()
            unit = self.peek()
            if unit is not None and unit.kind == "ident" and not self._is_key(1):
                self.take()

    def _is_key(self, offset: int) -> bool:
        """True when the ident at `offset` starts a key=... pair."""
        nxt = self.peek(offset + 1)
        return nxt is not None and nxt.kind == "eq"

    def _parse_value(self, attr: str, dimension: str) -> float | None:
        tok = self.peek()
        if tok is None or tok.kind != "number":
            self.error(f"malformed-value: expected a number for {attr!r}")
            if tok is not None:
                self.take()
            return None
        self.take()
        value = float(tok.text)
        unit_tok = self.peek()
        if unit_tok is not None and unit_tok.kind == "ident" and not self._is_key(0):
            self.take()
            unit = _UNITS.get(unit_tok.text)
            if unit is None:
                self.error(
                    f"bad-unit: unknown unit {unit_tok.text!r}", unit_tok.column
                )
                return None
            if unit[0] != dimension:
                self.error(
                    f"bad-unit: unit {unit_tok.text!r} does not apply to {attr!r}",
                    unit_tok.column,
                )
                return None
            value *= unit[1]
        if not math.isfinite(value):
            self.error(f"malformed-value: {attr!r} is not a finite number", tok.column)
            return None
        return value


def parse(text: str) -> ParseResult:
    """Parse netlist text into a document, or into error diagnostics.

    Never raises on string input.  The document is returned only when no
    error was found; warnings may accompany a valid document.
    """
    diags: list[ParseDiagnostic] = []
    components: list[ComponentDecl] = []
    chain: tuple[str, ...] | None = None
    chain_line = 0
    signal: SignalDecl | None = None

    for line_no, raw in enumerate(text.splitlines(), start=1):
        comment = raw.find("#")
        if comment >= 0:
            raw = raw[:comment]
        tokens, junk_columns = _scan(raw)
        for column in junk_columns:
            diags.append(
                ParseDiagnostic(line_no, column, "error", "unexpected character")
            )
        if junk_columns:
            continue
        if not tokens:
            continue
        lp = _LineParser(line_no, tokens, diags)
        head = lp.take()
        if head.kind != "ident":
            lp.error("expected component kind or directive", head.column)
            continue

        if head.text == "chain":
            names = []
            name_tok = lp.expect_ident("component name after 'chain'")
            if name_tok is None:
                continue
            names.append(name_tok.text)
            while lp.peek() is not None:
                arrow = lp.take()
                if arrow.kind != "arrow":
                    lp.error("expected '->' between chain entries", arrow.column)
                    break
                name_tok = lp.expect_ident("component name after '->'")
                if name_tok is None:
                    break
                names.append(name_tok.text)
            if lp.failed:
                continue
            if chain is not None:
                diags.append(
                    ParseDiagnostic(
                        line_no, head.column, "error",
                        "duplicate-chain: chain is already declared",
                    )
                )
                continue
            chain = tuple(names)
            chain_line = line_no
        elif head.text == "signal":
            node: str | None = None
            amplitude: float | None = None
            while lp.peek() is not None and not lp.failed:
                key_tok = lp.expect_ident("signal attribute")
                if key_tok is None:
                    break
                eq = lp.peek()
                if eq is None or eq.kind != "eq":
                    lp.error(f"expected '=' after {key_tok.text!r}")
                    break
                lp.take()
                if key_tok.text == "node":
                    node_tok = lp.expect_ident("component name for 'node'")
                    if node_tok is not None:
                        node = node_tok.text
                elif key_tok.text == "amplitude":
                    amplitude = lp._parse_value("amplitude", _PLAIN)
                    if amplitude is not None and amplitude < 0:
                        lp.error("out-of-range: 'amplitude' must be >= 0")
                else:
                    lp.error(
                        f"unknown-attribute: signal has no attribute {key_tok.text!r}",
                        key_tok.column,
                    )
                    break
            if lp.failed:
                continue
            if node is None or amplitude is None:
                diags.append(
                    ParseDiagnostic(
                        line_no, head.column, "error",
                        "missing-attribute: signal requires node= and amplitude=",
                    )
                )
                continue
            if signal is not None:
                diags.append(
                    ParseDiagnostic(
                        line_no, head.column, "error",
                        "duplicate-signal: signal is already declared",
                    )
                )
                continue
            signal = SignalDecl(node, amplitude, line_no, head.column)
        elif head.text in _KIND_ATTRS:
            name_tok = lp.expect_ident("component name")
            if name_tok is None:
                continue
            attrs = lp.parse_attributes(head.text)
            components.append(
                ComponentDecl(head.text, name_tok.text, attrs, line_no, head.column)
            )
        else:
            lp.error(f"unknown-kind: {head.text!r} is not a component kind", head.column)

    document = NetlistDocument(
        components=tuple(components),
        chain=chain if chain is not None else (),
        signal=signal,
        chain_line=chain_line,
    )
    diags.extend(_semantic_diagnostics(document))

    diags.sort(key=lambda d: (d.line, d.column))
    has_errors = any(d.severity == "error" for d in diags)
    return ParseResult(None if has_errors else document, tuple(diags))


def _semantic_diagnostics(doc: NetlistDocument) -> list[ParseDiagnostic]:
    """Document-level constraint checks, shared by parse and validate."""
    diags: list[ParseDiagnostic] = []

    def err(line: int, column: int, message: str) -> None:
        diags.append(ParseDiagnostic(line, column, "error", message))

    by_name: dict[str, ComponentDecl] = {}
    for comp in doc.components:
        if comp.kind not in _KIND_ATTRS:
            err(comp.line, comp.column,
                f"unknown-kind: {comp.kind!r} is not a component kind")
            continue
        if comp.name in by_name:
            err(comp.line, comp.column,
                f"duplicate-name: component {comp.name!r} is declared more than once")
        else:
            by_name[comp.name] = comp
        schema = _KIND_ATTRS[comp.kind]
        for key, value in comp.attributes.items():
            if key not in schema:
                err(comp.line, comp.column,
                    f"unknown-attribute: {comp.kind!r} has no attribute {key!r}")
                continue
            problem = schema[key][2](value)
            if problem is not None:
                err(comp.line, comp.column,
                    f"out-of-range: {key!r} {problem}, got {value:g}")
        missing = [
            key for key, (_, required, _) in schema.items()
            if required and key not in comp.attributes
        ]
        if missing:
            err(comp.line, comp.column,
                f"missing-attribute: {comp.kind} {comp.name!r} requires "
                + ", ".join(repr(k) for k in missing))

    if doc.chain:
        resolved = []
        for name in doc.chain:
            comp = by_name.get(name)
            if comp is None:
                err(doc.chain_line, 1,
                    f"dangling-reference: chain names undeclared component {name!r}")
            else:
                resolved.append(comp)
        if len(resolved) == len(doc.chain):
            homodynes = [c for c in resolved if c.kind == "homodyne"]
            if not homodynes:
                err(doc.chain_line, 1,
                    "missing-homodyne: chain must end at a homodyne detector")
            elif len(homodynes) > 1 or resolved[-1].kind != "homodyne":
                err(doc.chain_line, 1,
                    "misplaced-homodyne: chain must end at exactly one homodyne")
            opas = [c for c in resolved if c.kind == "opa"]
            if len(opas) > 1:
                err(doc.chain_line, 1, "multiple-opa: at most one opa per chain")
            elif opas and resolved[0].kind != "opa":
                err(doc.chain_line, 1,
                    "misplaced-opa: the opa must be the chain head")
    else:
        err(doc.chain_line, 1, "missing-chain: no chain declared")

    opa_decls = [c for c in doc.components if c.kind == "opa"]
    if len(opa_decls) > 1:
        err(opa_decls[1].line, opa_decls[1].column,
            "multiple-opa: at most one opa may be declared")

    chain_names = set(doc.chain)
    for comp in doc.components:
        if comp.name in by_name and comp.name not in chain_names:
            diags.append(
                ParseDiagnostic(
                    comp.line, comp.column, "warning",
                    f"unused-component: {comp.name!r} is declared but not in the chain",
                )
            )

    if doc.signal is not None:
        target = by_name.get(doc.signal.node)
        if target is None:
            err(doc.signal.line, doc.signal.column,
                f"dangling-reference: signal names undeclared component "
                f"{doc.signal.node!r}")
        elif target.kind != "cavity":
            err(doc.signal.line, doc.signal.column,
                f"bad-signal-node: {doc.signal.node!r} is not a cavity")
        elif target.name not in chain_names:
            err(doc.signal.line, doc.signal.column,
                f"bad-signal-node: {doc.signal.node!r} is not in the chain")
        if doc.signal.amplitude < 0:
            err(doc.signal.line, doc.signal.column,
                "out-of-range: 'amplitude' must be >= 0")

    return diags


def validate(doc: NetlistDocument) -> ValidationResult:
    """Check all document constraints and build the executable pipeline."""
    diags = _semantic_diagnostics(doc)
    diags.sort(key=lambda d: (d.line, d.column))
    if any(d.severity == "error" for d in diags):
        return ValidationResult(None, tuple(diags))

    by_name = {comp.name: comp for comp in doc.components}
    source: OpaSpec | None = None
    detector: HomodyneSpec | None = None
    stages: list[PipelineStage] = []
    for name in doc.chain:
        comp = by_name[name]
        a = comp.attributes
        if comp.kind == "opa":
            source = OpaSpec(
                pump_x=a["pump_x"],
                bandwidth=a["bandwidth"],
                escape_efficiency=a["escape"],
            )
        elif comp.kind == "cavity":
            stages.append(
                PipelineStage(
                    name,
                    CavitySpec(
                        length=a["length"],
                        r_in=a["r_in"],
                        r_end=a["r_end"],
                        round_trip_loss=a.get("loss_rt", 0.0),
                        detuning=a["detuning"],
                    ),
                )
            )
        elif comp.kind == "loss":
            stages.append(PipelineStage(name, LossSpec(eta=a["eta"], label=name)))
        elif comp.kind == "homodyne":
            detector = HomodyneSpec(angle=a["angle"], quantum_efficiency=a["qe"])

    signal = None
    if doc.signal is not None:
        signal = SignalSpec(doc.signal.node, doc.signal.amplitude)
    pipeline = Pipeline(source, tuple(stages), detector, signal)
    return ValidationResult(pipeline, tuple(diags))


def _format_number(value: float) -> str:
    if value == int(value) and abs(value) < 1e16:
        return str(int(value))
    return repr(value)


def _format_value(dimension: str, value: float) -> str:
    if dimension == _FREQ:
        for scale, unit in ((1e9, "GHz"), (1e6, "MHz"), (1e3, "kHz")):
            scaled = value / scale
            if abs(scaled) >= 1.0 and scaled * scale == value:
                return _format_number(scaled) + unit
        return _format_number(value) + "Hz"
    if dimension == _LEN:
        return _format_number(value) + "m"
    return _format_number(value)  # radians and fractions are plain


def serialize(doc: NetlistDocument) -> str:
    """Canonical text form: declaration order kept, attribute keys sorted,
    units normalized.  parse(serialize(doc)) equals doc structurally."""
    lines = []
    for comp in doc.components:
        schema = _KIND_ATTRS.get(comp.kind, {})
        parts = [comp.kind, comp.name]
        for key in sorted(comp.attributes):
            dimension = schema.get(key, (_PLAIN,))[0]
            parts.append(f"{key}={_format_value(dimension, comp.attributes[key])}")
        lines.append(" ".join(parts))
    if doc.chain:
        lines.append("chain " + " -> ".join(doc.chain))
    if doc.signal is not None:
        lines.append(
            f"signal node={doc.signal.node} "
            f"amplitude={_format_number(doc.signal.amplitude)}"
        )
    return "\n".join(lines) + "\n"
