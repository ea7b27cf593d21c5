"""
Literal parsers for JucysWorkbench
Tokenizes word literals such as "T0 T1 T2^-1" and key=value configuration text
"""

import re
from typing import Any, Dict, List, Sequence, Tuple

Letter = Tuple[str, int]


class WordParser:
    """Parses whitespace-separated generator tokens into signed letters"""

    # Generator symbol, optional integer exponent
    TOKEN = re.compile(r"^(?P<gen>[A-Za-z]+'?(?:-?\d+)?)(?:\^(?P<exp>-?\d+))?$")

    # Literals denoting the empty word
    UNIT = {'', '1', 'e', '()'}

    @classmethod
    def parse(cls, text: str) -> Tuple[Letter, ...]:
        """
        Parse a word literal

        Args:
            text: Tokens separated by whitespace or '*', e.g. "T0 T1 T2^-1"

        Returns:
            Tuple of (generator, +1/-1) letters
        """
        text = text.strip()
        if text in cls.UNIT:
            return ()

        letters: List[Letter] = []
        for token in re.split(r"[\s*]+", text):
            if not token:
                continue
            match = cls.TOKEN.match(token)
            if not match:
                raise ValueError(f"Invalid generator token '{token}' in word '{text}'")
            exp = int(match.group('exp') or 1)
            if exp == 0:
                continue
            sign = 1 if exp > 0 else -1
            letters.extend([(match.group('gen'), sign)] * abs(exp))
        return tuple(letters)

    @classmethod
    def format(cls, letters: Sequence[Letter]) -> str:
        """Inverse of parse; the empty word prints as '1'"""
        if not letters:
            return '1'
        return ' '.join(gen if sign > 0 else f"{gen}^-1" for gen, sign in letters)


class KeyValueParser:
    """Parses 'key = value' lines with '#' comments into typed values"""

    BOOLEANS = {
        'true': True,
        'yes': True,
        'on': True,
        'false': False,
        'no': False,
        'off': False,
    }

    @classmethod
    def parse(cls, text: str) -> Dict[str, Any]:
        result: Dict[str, Any] = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split('#', 1)[0].strip()
            if not line:
                continue
            if '=' not in line:
                raise ValueError(f"Line {lineno}: expected 'key = value', got '{raw.strip()}'")
            key, value = (part.strip() for part in line.split('=', 1))
            if not key:
                raise ValueError(f"Line {lineno}: empty key")
            result[key.replace('-', '_').lower()] = cls._parse_value(value)
        return result

    @classmethod
    def _parse_value(cls, value: str) -> Any:
        """Parse value, attempting type conversion"""
        lowered = value.lower()
        if lowered in cls.BOOLEANS:
            return cls.BOOLEANS[lowered]
        try:
            return int(value)
        except ValueError:
            pass
        if len(value) >= 2 and value[0] == value[-1] and value[0] in '"\'':
            return value[1:-1]
        return value

    @classmethod
    def format(cls, values: Dict[str, Any]) -> str:
        lines = []
        for key in sorted(values):
            value = values[key]
            if value is None:
                continue
            if isinstance(value, bool):
                value = 'true' if value else 'false'
            lines.append(f"{key} = {value}")
        return '\n'.join(lines) + '\n'
