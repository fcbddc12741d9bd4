import logging
from pathlib import Path
from typing import Dict, List, Sequence, Union

from ..data.grammar import UNK_TOKEN, grammar_tokens
from ..errors import DataError, ParameterError

logger = logging.getLogger(__name__)


class PhraseVocabulary:
    """Dense token -> id table; id 0 is reserved for unknown words."""

    def __init__(self, tokens: Sequence[str]):
        tokens = list(tokens)
        if not tokens or tokens[0] != UNK_TOKEN:
            raise ParameterError(f"Vocabulary must start with the reserved '{UNK_TOKEN}' token")
        if len(set(tokens)) != len(tokens):
            raise ParameterError("Vocabulary tokens must be unique")
        self.tokens: List[str] = tokens
        self._ids: Dict[str, int] = {token: idx for idx, token in enumerate(tokens)}

    @classmethod
    def from_grammar(cls) -> "PhraseVocabulary":
        return cls(grammar_tokens())

    @property
    def unk_id(self) -> int:
        return 0

    def __len__(self) -> int:
        return len(self.tokens)

    def __eq__(self, other) -> bool:
        return isinstance(other, PhraseVocabulary) and self.tokens == other.tokens

    def token_id(self, word: str) -> int:
        return self._ids.get(word, self.unk_id)

    def encode(self, phrase: Union[str, Sequence[str]]) -> List[int]:
        words = phrase.lower().split() if isinstance(phrase, str) else [w.lower() for w in phrase]
        if not words:
            raise ParameterError("Cannot embed an empty phrase")
        return [self.token_id(word) for word in words]

    def save(self, path: Union[str, Path]) -> None:
        Path(path).write_text("\n".join(self.tokens) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: Union[str, Path]) -> "PhraseVocabulary":
        path = Path(path)
        if not path.is_file():
            raise DataError(f"Vocabulary file not found: {path}")
        tokens = [line.strip() for line in path.read_text(encoding="utf-8").splitlines() if line.strip()]
        logger.debug(f"Loaded vocabulary of {len(tokens)} tokens from {path}")
        return cls(tokens)
