"""Exception hierarchy and source positions shared by every layer.

Each error class carries a stable machine-readable ``code`` so the CLI and
the HTTP service can map failures without string matching.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class SourceSpan:
    """1-based position of a token inside an input file."""

    file: str
    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"


class SecweaveError(Exception):
    """Base class for all errors raised by this package."""

    code = "error"


# ---------------------------------------------------------------------------
# text formats

class ParseError(SecweaveError):
    """Malformed input text; carries the offending position."""

    code = "syntax_error"

    def __init__(self, message: str, span: SourceSpan):
        super().__init__(f"{span}: {message}")
        self.span = span


class ResolutionError(ParseError):
    """Syntactically valid text referencing an unknown name."""

    code = "resolution_error"


# ---------------------------------------------------------------------------
# machine semantics

class UnboundName(SecweaveError):
    code = "unbound_name"


class TypeMismatch(SecweaveError):
    code = "type_mismatch"


class UnknownSet(SecweaveError):
    code = "unknown_set"


class UnknownState(SecweaveError):
    code = "unknown_state"


class UnknownSignal(SecweaveError):
    code = "unknown_signal"


class UnknownParam(SecweaveError):
    code = "unknown_param"


class NotEnabled(SecweaveError):
    code = "not_enabled"


# ---------------------------------------------------------------------------
# policies

class XmlError(SecweaveError):
    code = "xml_error"


class UnsupportedFeature(SecweaveError):
    code = "unsupported_feature"


class SchemaError(SecweaveError):
    code = "schema_error"


class UnresolvableAttribute(SecweaveError):
    code = "unresolvable_attribute"

    def __init__(self, attribute_id: str, detail: str = ""):
        tail = f" ({detail})" if detail else ""
        super().__init__(f"UnresolvableAttribute: {attribute_id!r}{tail}")
        self.attribute_id = attribute_id


class UnsupportedFunction(SecweaveError):
    code = "unsupported_function"


# ---------------------------------------------------------------------------
# weaving

class WeaveError(SecweaveError):
    code = "weave_error"


class MissingObservationMapping(WeaveError):
    code = "missing_observation_mapping"

    def __init__(self, signal: str):
        super().__init__(
            f"MissingObservationMapping: no deny output configured for input signal {signal!r}"
        )
        self.signal = signal


# ---------------------------------------------------------------------------
# simulation

class InvalidChoice(SecweaveError):
    code = "invalid_choice"


class NothingToUndo(SecweaveError):
    code = "nothing_to_undo"


# ---------------------------------------------------------------------------
# generation

class NondeterministicAt(SecweaveError):
    code = "nondeterministic_at"

    def __init__(self, value, transitions):
        super().__init__(
            f"NondeterministicAt: value {value!r} enables {len(transitions)} transitions"
        )
        self.value = value
        self.transitions = transitions


class DeadlockedCursor(SecweaveError):
    code = "deadlocked_cursor"


class Exhausted(SecweaveError):
    """Search budget ran out; ``partial`` holds the trace built so far."""

    code = "exhausted"

    def __init__(self, message: str, partial):
        super().__init__(message)
        self.partial = partial
