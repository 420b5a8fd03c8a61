"""Line-oriented resolution policy files.

::

    # comment
    default function=ALL cardinality=SINGLEVALUED on-error=RETURN_ALL agree-coefficient=4
    property <http://www.w3.org/2000/01/rdf-schema#label> function=BEST
    property <http://example.com/p> function=TOPN n=3
    property <http://example.com/q> function=CONCAT separator=" | "

Fields not given fall back to the built-in defaults; any key other than
``function``, ``cardinality``, ``on-error`` and ``agree-coefficient`` is passed
to the resolution function as a parameter.
"""
from __future__ import annotations

import shlex

from .functions import MissingParamError, UnknownFunctionError, validate_strategy
from .model import Node, uri
from .strategy import Cardinality, ErrorStrategy, ResolutionPolicy, ResolutionStrategy


class PolicySyntaxError(ValueError):
    def __init__(self, line_number: int, message: str):
        super().__init__(f"policy line {line_number}: {message}")
        self.line_number = line_number


def _strategy(fields: list[str], lineno: int) -> ResolutionStrategy:
    kwargs: dict = {}
    params: dict[str, str] = {}
    for item in fields:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise PolicySyntaxError(lineno, f"expected key=value, got {item!r}")
        if key == "function":
            kwargs["function"] = value
        elif key == "cardinality":
            try:
                kwargs["cardinality"] = Cardinality(value.upper())
            except ValueError:
                raise PolicySyntaxError(lineno, f"bad cardinality {value!r}") from None
        elif key == "on-error":
            try:
                kwargs["error_strategy"] = ErrorStrategy(value.upper().replace("-", "_"))
            except ValueError:
                raise PolicySyntaxError(lineno, f"bad on-error value {value!r}") from None
        elif key == "agree-coefficient":
            try:
                kwargs["agree_coefficient"] = float(value)
            except ValueError:
                raise PolicySyntaxError(lineno, f"bad agree-coefficient {value!r}") from None
        else:
            params[key] = value
    try:
        strategy = ResolutionStrategy(params=params, **kwargs)
    except ValueError as exc:
        raise PolicySyntaxError(lineno, str(exc)) from None
    try:
        validate_strategy(strategy)
    except UnknownFunctionError as exc:
        exc.line_number = lineno
        raise
    except MissingParamError as exc:
        raise PolicySyntaxError(lineno, str(exc)) from None
    return strategy


def parse_policy(text: str) -> ResolutionPolicy:
    """Parse policy text; raises :class:`PolicySyntaxError` or ``UnknownFunctionError``."""
    default = ResolutionStrategy()
    per_property: dict[Node, ResolutionStrategy] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        lexer = shlex.shlex(stripped, posix=True)
        lexer.whitespace_split = True
        lexer.commenters = ""
        try:
            tokens = list(lexer)
        except ValueError as exc:
            raise PolicySyntaxError(lineno, str(exc)) from None
        head, rest = tokens[0], tokens[1:]
        if head == "default":
            default = _strategy(rest, lineno)
        elif head == "property":
            if not rest or not (rest[0].startswith("<") and rest[0].endswith(">")):
                raise PolicySyntaxError(lineno, "expected property <IRI>")
            try:
                prop = uri(rest[0][1:-1])
            except ValueError as exc:
                raise PolicySyntaxError(lineno, str(exc)) from None
            if prop in per_property:
                raise PolicySyntaxError(lineno, f"property {rest[0]} configured twice")
            per_property[prop] = _strategy(rest[1:], lineno)
        else:
            raise PolicySyntaxError(lineno, f"unknown directive {head!r}")
    return ResolutionPolicy(default, per_property)
