"""Coarse part-of-speech tagging and the content-token index set.

Selective pooling restricts to steps belonging to noun, verb, or adjective
words.  Tags come from, in order of precedence: tags stored on the record,
a bundled word lexicon, suffix rules, and finally OTHER.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from importlib import resources

from .errors import DataFormatError
from .records import WordAlignment


class PosTag(enum.Enum):
    NOUN = "NOUN"
    VERB = "VERB"
    ADJ = "ADJ"
    OTHER = "OTHER"


CONTENT_TAGS = frozenset((PosTag.NOUN, PosTag.VERB, PosTag.ADJ))


@dataclass(frozen=True)
class ContentMask:
    """Sorted, deduplicated step indices of content tokens."""

    indices: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(sorted(set(self.indices))))

    def __len__(self) -> int:
        return len(self.indices)

    def __bool__(self) -> bool:
        return bool(self.indices)


@dataclass(frozen=True)
class TagLexicon:
    """Word lookup plus ordered suffix fallback rules (first match wins)."""

    entries: dict[str, PosTag]
    suffix_rules: tuple[tuple[str, PosTag], ...]

    def __post_init__(self):
        for suffix, _ in self.suffix_rules:
            if not suffix:
                raise ValueError("empty suffix in rule list")


def _parse_tag(text: str, where: str) -> PosTag:
    try:
        return PosTag[text]
    except KeyError:
        raise DataFormatError(f"{where}: unknown POS tag {text!r}") from None


def _parse_tsv(text: str, path: str):
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.rstrip("\n")
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise DataFormatError(f"{path}:{lineno}: expected word<TAB>TAG")
        yield lineno, parts[0], parts[1]


def load_lexicon(lexicon_path: str, rules_path: str) -> TagLexicon:
    with open(lexicon_path, encoding="utf-8") as fh:
        lex_text = fh.read()
    with open(rules_path, encoding="utf-8") as fh:
        rules_text = fh.read()
    return _lexicon_from_text(lex_text, rules_text, lexicon_path, rules_path)


def _lexicon_from_text(lex_text, rules_text, lex_path, rules_path) -> TagLexicon:
    entries = {}
    for lineno, word, tag in _parse_tsv(lex_text, lex_path):
        entries[word.lower()] = _parse_tag(tag, f"{lex_path}:{lineno}")
    rules = []
    for lineno, suffix, tag in _parse_tsv(rules_text, rules_path):
        rules.append((suffix.lower(), _parse_tag(tag, f"{rules_path}:{lineno}")))
    return TagLexicon(entries=entries, suffix_rules=tuple(rules))


_default_lexicon: TagLexicon | None = None


def default_lexicon() -> TagLexicon:
    """The bundled ~5k-word lexicon and suffix rules, loaded once."""
    global _default_lexicon
    if _default_lexicon is None:
        data = resources.files("capcal.data")
        _default_lexicon = _lexicon_from_text(
            data.joinpath("lexicon.tsv").read_text(encoding="utf-8"),
            data.joinpath("suffix_rules.tsv").read_text(encoding="utf-8"),
            "lexicon.tsv", "suffix_rules.tsv")
    return _default_lexicon


def tag_word(word: str, lexicon: TagLexicon) -> PosTag:
    w = word.lower()
    hit = lexicon.entries.get(w)
    if hit is not None:
        return hit
    for suffix, tag in lexicon.suffix_rules:
        # the suffix must be proper: "ing" itself is not an -ing form
        if len(w) > len(suffix) and w.endswith(suffix):
            return tag
    return PosTag.OTHER


def tag_words(words: list[str], lexicon: TagLexicon) -> list[PosTag]:
    return [tag_word(w, lexicon) for w in words]


def coarsen_tag(raw: str) -> PosTag:
    """Map a stored tag to the coarse set; Penn-style tags by prefix."""
    if raw in PosTag.__members__:
        return PosTag[raw]
    if raw.startswith("NN"):
        return PosTag.NOUN
    if raw.startswith("VB"):
        return PosTag.VERB
    if raw.startswith("JJ"):
        return PosTag.ADJ
    return PosTag.OTHER


def content_mask(tags: list[PosTag]) -> list[bool]:
    return [t in CONTENT_TAGS for t in tags]


def project_to_tokens(mask: list[bool],
                      alignment: list[WordAlignment] | None,
                      n_steps: int) -> ContentMask:
    """Expand a word-level mask to step indices.

    Without an alignment, word i is step i; with one, every step inside a
    selected word's span is included.
    """
    if alignment is None:
        if len(mask) != n_steps:
            raise ValueError(
                f"no alignment: mask has {len(mask)} words for {n_steps} steps")
        return ContentMask(tuple(i for i, m in enumerate(mask) if m))
    indices = []
    for a in alignment:
        if not (0 <= a.word_index < len(mask)):
            raise ValueError(f"alignment word_index {a.word_index} out of "
                             f"range for {len(mask)} words")
        start, end = a.token_span
        if not (0 <= start <= end <= n_steps):
            raise ValueError(f"alignment span [{start}, {end}) outside "
                             f"[0, {n_steps})")
        if mask[a.word_index]:
            indices.extend(range(start, end))
    return ContentMask(tuple(indices))


def mask_for_record(record, lexicon: TagLexicon | None = None) -> ContentMask:
    """Content mask for one record; stored tags beat the lexicon."""
    if record.word_pos is not None:
        tags = [coarsen_tag(t) for t in record.word_pos]
    else:
        tags = tag_words(record.words, lexicon or default_lexicon())
    return project_to_tokens(content_mask(tags), record.alignment,
                             len(record.steps))
