import pytest

from jucys_workbench.parser import KeyValueParser, WordParser


def test_word_parser_exponents():
    assert WordParser.parse("T0 T1^2 T2^-1") == (('T0', 1), ('T1', 1), ('T1', 1), ('T2', -1))
    assert WordParser.parse("T1*K1") == (('T1', 1), ('K1', 1))
    assert WordParser.parse("T1^0") == ()


@pytest.mark.parametrize('text', ['', '1', 'e', '()'])
def test_word_parser_unit_literals(text):
    assert WordParser.parse(text) == ()


def test_word_parser_primed_and_bar_generators():
    assert WordParser.parse("T'1 Xb") == (("T'1", 1), ('Xb', 1))


def test_word_parser_rejects_garbage():
    with pytest.raises(ValueError):
        WordParser.parse("T1 ^^2")


def test_word_format_inverts_parse():
    letters = WordParser.parse("T0 T1^-1 K2")
    assert WordParser.format(letters) == "T0 T1^-1 K2"
    assert WordParser.format(()) == '1'


def test_key_value_parser_types_and_comments():
    text = """
    # run configuration
    suite = bmw-identities
    n = 3          # strands
    verbose = yes
    out = "report.json"
    max-dim = 400
    """
    assert KeyValueParser.parse(text) == {
        'suite': 'bmw-identities',
        'n': 3,
        'verbose': True,
        'out': 'report.json',
        'max_dim': 400,
    }


def test_key_value_parser_errors():
    with pytest.raises(ValueError, match="Line 1"):
        KeyValueParser.parse("n 3")
    with pytest.raises(ValueError, match="empty key"):
        KeyValueParser.parse("= 3")


def test_key_value_format_skips_none():
    text = KeyValueParser.format({'n': 3, 'out': None, 'verbose': False})
    assert text == "n = 3\nverbose = false\n"
    assert KeyValueParser.parse(text) == {'n': 3, 'verbose': False}
