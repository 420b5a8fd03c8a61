import pytest

from quadfuse.functions import UnknownFunctionError
from quadfuse.model import uri
from quadfuse.policy import PolicySyntaxError, parse_policy
from quadfuse.strategy import Cardinality, ErrorStrategy, ResolutionPolicy, ResolutionStrategy

from helpers import DATA_DIR

LABEL = uri("http://www.w3.org/2000/01/rdf-schema#label")


def test_empty_policy_is_all_defaults():
    policy = parse_policy("")
    assert policy == ResolutionPolicy()
    d = policy.default
    assert (d.function, d.cardinality, d.error_strategy, d.agree_coefficient) == (
        "ALL", Cardinality.SINGLEVALUED, ErrorStrategy.RETURN_ALL, 4.0)


def test_default_and_property_lines():
    policy = parse_policy(
        "# comment\n"
        "default function=ALL\n"
        "\n"
        f"property <{LABEL.value}> function=best\n"
    )
    assert policy.default.function == "ALL"
    assert policy.per_property[LABEL].function == "BEST"


def test_params_and_options():
    policy = parse_policy(
        "default function=VOTE cardinality=manyvalued on-error=ignore agree-coefficient=2.5\n"
        "property <http://example.org/p> function=TOPN n=3\n"
        'property <http://example.org/q> function=CONCAT separator=" | "\n'
    )
    assert policy.default == ResolutionStrategy("VOTE", Cardinality.MANYVALUED, ErrorStrategy.IGNORE, {}, 2.5)
    assert policy.per_property[uri("http://example.org/p")].params == {"n": "3"}
    assert policy.per_property[uri("http://example.org/q")].params == {"separator": " | "}
    assert policy.many_valued() == set()


def test_sample_policy_file():
    policy = parse_policy((DATA_DIR / "policy.txt").read_text())
    assert policy.per_property[LABEL].function == "BEST"
    assert policy.per_property[uri("http://www.w3.org/2003/01/geo/wgs84_pos#long")].function == "AVG"


def test_unknown_function_surfaces_at_parse_time():
    with pytest.raises(UnknownFunctionError) as err:
        parse_policy("default function=ALL\nproperty <http://example.org/p> function=FROBNICATE\n")
    assert err.value.line_number == 2


@pytest.mark.parametrize("text, line", [
    ("default function=TOPN\n", 1),
    ("default function=ALL\nproperty http://no-brackets function=ALL\n", 2),
    ("frobnicate function=ALL\n", 1),
    ("default cardinality=SOMETIMES\n", 1),
    ("default on-error=PANIC\n", 1),
    ("default agree-coefficient=zero\n", 1),
    ("default agree-coefficient=0\n", 1),
    ("default function\n", 1),
    ('default function="ALL\n', 1),
    ("property <http://a> function=ALL\nproperty <http://a> function=ANY\n", 2),
    ("property <http://a b> function=ALL\n", 1),
])
def test_syntax_errors_carry_line_numbers(text, line):
    with pytest.raises(PolicySyntaxError) as err:
        parse_policy(text)
    assert err.value.line_number == line
