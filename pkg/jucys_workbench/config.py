"""
Suite configuration for JucysWorkbench
Defaults, key=value config files, the JUCYS_SEED fallback and validation
"""

import logging
import os
from dataclasses import asdict, dataclass, fields, replace
from typing import Any, Dict, Mapping, Optional

from .errors import ConfigError
from .parser import KeyValueParser
from .scalar import DEFAULT_MAGNITUDE

logger = logging.getLogger(__name__)

SUITES = (
    'bmw-identities',
    'braid-jm',
    'affine-reflection',
    'trace',
    'bethe',
    'qkz-flatness',
    'periodic',
    'cherednik',
    'all',
)

# Suites that close a cyclotomic quotient of the given degree
CYCLOTOMIC_SUITES = frozenset({'braid-jm', 'affine-reflection', 'trace', 'bethe', 'qkz-flatness', 'cherednik', 'all'})

FORMATS = ('json', 'text')

SEED_ENV = 'JUCYS_SEED'

INT_FIELDS = frozenset({'n', 'degree', 'trials', 'seed', 'magnitude', 'max_dim'})


@dataclass(frozen=True)
class SuiteConfig:
    """One verification run"""

    suite: str = 'all'
    n: int = 3
    degree: int = 2
    trials: int = 5
    seed: int = 0
    magnitude: int = DEFAULT_MAGNITUDE
    max_dim: Optional[int] = None
    fmt: str = 'json'
    out: Optional[str] = None
    verbose: bool = False

    def validate(self) -> "SuiteConfig":
        """
        Raises:
            ConfigError: on an unknown suite or format, or out-of-range numbers
        """
        if self.suite not in SUITES:
            raise ConfigError(f"Unknown suite '{self.suite}', expected one of {', '.join(SUITES)}")
        if self.fmt not in FORMATS:
            raise ConfigError(f"Unknown format '{self.fmt}', expected json or text")
        if self.n < 1:
            raise ConfigError(f"n must be at least 1, got {self.n}")
        if self.suite in CYCLOTOMIC_SUITES and not 2 <= self.degree <= 3:
            raise ConfigError(f"Suite {self.suite} needs degree 2 or 3, got {self.degree}")
        if self.trials < 1:
            raise ConfigError(f"trials must be at least 1, got {self.trials}")
        if self.magnitude < 10:
            raise ConfigError(f"magnitude must be at least 10, got {self.magnitude}")
        if self.max_dim is not None and self.max_dim < 1:
            raise ConfigError(f"max_dim must be positive, got {self.max_dim}")
        return self

    def to_text(self) -> str:
        return KeyValueParser.format(asdict(self))

    @classmethod
    def from_mapping(cls, values: Mapping[str, Any]) -> "SuiteConfig":
        known = {f.name: f for f in fields(cls)}
        unknown = sorted(set(values) - set(known))
        if unknown:
            raise ConfigError(f"Unknown configuration keys: {', '.join(unknown)}")
        kwargs: Dict[str, Any] = {}
        for key, value in values.items():
            if value is None:
                continue
            if key in INT_FIELDS and not isinstance(value, int):
                try:
                    value = int(value)
                except (TypeError, ValueError):
                    raise ConfigError(f"Configuration key '{key}' needs an integer, got {value!r}") from None
            kwargs[key] = value
        return cls(**kwargs)

    @classmethod
    def from_text(cls, text: str) -> "SuiteConfig":
        try:
            values = KeyValueParser.parse(text)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        return cls.from_mapping(values)

    @classmethod
    def resolve(cls, flags: Mapping[str, Any], file_text: Optional[str] = None,
                env: Optional[Mapping[str, str]] = None) -> "SuiteConfig":
        """
        Defaults < config file < JUCYS_SEED (seed only) < command-line flags

        Args:
            flags: Values given on the command line; None means absent
            file_text: Contents of the config file, if any
            env: Environment, os.environ by default
        """
        config = cls.from_text(file_text) if file_text else cls()
        env = os.environ if env is None else env
        if flags.get('seed') is None and env.get(SEED_ENV):
            try:
                config = replace(config, seed=int(env[SEED_ENV]))
            except ValueError:
                raise ConfigError(f"{SEED_ENV} must be an integer, got {env[SEED_ENV]!r}") from None
            logger.info("Seed %d taken from %s", config.seed, SEED_ENV)
        overrides = {k: v for k, v in flags.items() if v is not None}
        if overrides:
            config = cls.from_mapping({**asdict(config), **overrides})
        return config.validate()
