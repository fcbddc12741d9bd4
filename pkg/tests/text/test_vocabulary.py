import pytest

from label_diffusion.data.grammar import UNK_TOKEN
from label_diffusion.errors import DataError, ParameterError
from label_diffusion.text import PhraseVocabulary


def test_grammar_vocabulary_covers_phrase_words():
    vocab = PhraseVocabulary.from_grammar()
    assert vocab.tokens[0] == UNK_TOKEN
    for word in ("red", "circle", "circles", "two", "three", "small", "large", "grass", "left"):
        assert vocab.token_id(word) != vocab.unk_id


def test_unknown_words_map_to_unk():
    vocab = PhraseVocabulary.from_grammar()
    assert vocab.encode("Red zebra") == [vocab.token_id("red"), vocab.unk_id]


def test_empty_phrase_rejected():
    with pytest.raises(ParameterError):
        PhraseVocabulary.from_grammar().encode("   ")


def test_vocabulary_requires_unk_first():
    with pytest.raises(ParameterError):
        PhraseVocabulary(["red", UNK_TOKEN])
    with pytest.raises(ParameterError):
        PhraseVocabulary([UNK_TOKEN, "red", "red"])


def test_save_and_load(tmp_path):
    vocab = PhraseVocabulary.from_grammar()
    path = tmp_path / "vocab.txt"
    vocab.save(path)
    assert PhraseVocabulary.load(path) == vocab


def test_load_missing_file(tmp_path):
    with pytest.raises(DataError):
        PhraseVocabulary.load(tmp_path / "missing.txt")
