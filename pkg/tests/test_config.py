import pytest

from jucys_workbench.config import SuiteConfig
from jucys_workbench.errors import ConfigError
from jucys_workbench.scalar import DEFAULT_MAGNITUDE


def test_defaults():
    config = SuiteConfig()
    assert config.trials == 5
    assert config.magnitude == DEFAULT_MAGNITUDE
    assert config.validate() is config


def test_text_round_trip():
    config = SuiteConfig(suite='trace', n=2, seed=9, max_dim=300, verbose=True)
    assert SuiteConfig.from_text(config.to_text()) == config


@pytest.mark.parametrize('changes, message', [
    ({'suite': 'nope'}, 'Unknown suite'),
    ({'fmt': 'xml'}, 'Unknown format'),
    ({'n': 0}, 'n must be at least 1'),
    ({'suite': 'trace', 'degree': 1}, 'needs degree 2 or 3'),
    ({'trials': 0}, 'trials'),
    ({'magnitude': 3}, 'magnitude'),
    ({'max_dim': 0}, 'max_dim'),
])
def test_validation(changes, message):
    with pytest.raises(ConfigError, match=message):
        SuiteConfig(**changes).validate()


def test_degree_ignored_for_type_a_suites():
    assert SuiteConfig(suite='bmw-identities', degree=1).validate().degree == 1


def test_unknown_keys_rejected():
    with pytest.raises(ConfigError, match='colour'):
        SuiteConfig.from_text("colour = blue\n")


def test_integer_fields_coerced():
    with pytest.raises(ConfigError, match="'n' needs an integer"):
        SuiteConfig.from_mapping({'n': 'three'})


def test_precedence():
    file_text = "suite = trace\nn = 2\nseed = 4\n"
    assert SuiteConfig.resolve({}, file_text, env={}).seed == 4
    assert SuiteConfig.resolve({}, file_text, env={'JUCYS_SEED': '11'}).seed == 11
    config = SuiteConfig.resolve({'seed': 5, 'n': 3, 'trials': None}, file_text, env={'JUCYS_SEED': '11'})
    assert (config.suite, config.n, config.seed, config.trials) == ('trace', 3, 5, 5)


def test_bad_environment_seed():
    with pytest.raises(ConfigError, match='JUCYS_SEED'):
        SuiteConfig.resolve({}, None, env={'JUCYS_SEED': 'x'})
