"""Coarse POS tagging, the tag-source precedence chain, and mask projection."""

import pytest

from capcal.errors import DataFormatError
from capcal.postag import (
    ContentMask,
    PosTag,
    TagLexicon,
    coarsen_tag,
    content_mask,
    default_lexicon,
    load_lexicon,
    mask_for_record,
    project_to_tokens,
    tag_word,
    tag_words,
)
from capcal.records import WordAlignment

from conftest import make_record


def test_default_lexicon_spot_checks():
    lex = default_lexicon()
    assert tag_word("dog", lex) is PosTag.NOUN
    assert tag_word("barks", lex) is PosTag.VERB
    assert tag_word("loud", lex) is PosTag.ADJ
    assert tag_word("the", lex) is PosTag.OTHER
    assert tag_word("and", lex) is PosTag.OTHER


def test_lookup_is_case_insensitive():
    lex = default_lexicon()
    assert tag_word("Dog", lex) is PosTag.NOUN
    assert tag_word("THE", lex) is PosTag.OTHER


def test_lexicon_beats_suffix_rules():
    lex = default_lexicon()
    # both end in -ing, which the suffix rules call VERB
    assert tag_word("during", lex) is PosTag.OTHER
    assert tag_word("morning", lex) is PosTag.NOUN


def test_suffix_fallback_for_unknown_words():
    lex = default_lexicon()
    assert tag_word("barking", lex) is PosTag.VERB
    assert tag_word("glorped", lex) is PosTag.VERB
    assert tag_word("crunchness", lex) is PosTag.NOUN
    assert tag_word("zaption", lex) is PosTag.NOUN
    assert tag_word("flumious", lex) is PosTag.ADJ
    assert tag_word("glarful", lex) is PosTag.ADJ


def test_suffix_rules_first_match_wins():
    lex = default_lexicon()
    # -ly (OTHER) is listed before -y (ADJ)
    assert tag_word("blorply", lex) is PosTag.OTHER
    assert tag_word("blorpy", lex) is PosTag.ADJ


def test_suffix_must_be_proper():
    lex = default_lexicon()
    # the bare suffix is not an inflected form of anything
    assert tag_word("ing", lex) is PosTag.OTHER


def test_unknown_word_is_other():
    lex = default_lexicon()
    assert tag_word("qqqq", lex) is PosTag.OTHER


def test_tag_words_maps_each_word():
    lex = default_lexicon()
    assert tag_words(["the", "dog", "barks"], lex) == [
        PosTag.OTHER, PosTag.NOUN, PosTag.VERB]


def test_coarsen_exact_names():
    assert coarsen_tag("NOUN") is PosTag.NOUN
    assert coarsen_tag("VERB") is PosTag.VERB
    assert coarsen_tag("ADJ") is PosTag.ADJ
    assert coarsen_tag("OTHER") is PosTag.OTHER


def test_coarsen_penn_prefixes():
    assert coarsen_tag("NN") is PosTag.NOUN
    assert coarsen_tag("NNS") is PosTag.NOUN
    assert coarsen_tag("NNP") is PosTag.NOUN
    assert coarsen_tag("VB") is PosTag.VERB
    assert coarsen_tag("VBZ") is PosTag.VERB
    assert coarsen_tag("JJ") is PosTag.ADJ
    assert coarsen_tag("JJR") is PosTag.ADJ
    assert coarsen_tag("DT") is PosTag.OTHER
    assert coarsen_tag("IN") is PosTag.OTHER
    assert coarsen_tag("whatever") is PosTag.OTHER


def test_content_mask_selects_content_tags():
    tags = [PosTag.OTHER, PosTag.NOUN, PosTag.VERB, PosTag.ADJ, PosTag.OTHER]
    assert content_mask(tags) == [False, True, True, True, False]


def test_content_mask_dataclass_sorts_and_dedups():
    m = ContentMask((3, 1, 1, 0))
    assert m.indices == (0, 1, 3)
    assert len(m) == 3
    assert bool(m)
    assert not ContentMask(())


def test_project_without_alignment_is_identity():
    m = project_to_tokens([True, False, True], None, 3)
    assert m.indices == (0, 2)


def test_project_without_alignment_checks_length():
    with pytest.raises(ValueError, match="mask has 2 words for 3 steps"):
        project_to_tokens([True, False], None, 3)


def test_project_with_alignment_expands_spans():
    alignment = [WordAlignment(0, (0, 2)), WordAlignment(1, (2, 3)),
                 WordAlignment(2, (3, 6))]
    m = project_to_tokens([True, False, True], alignment, 6)
    assert m.indices == (0, 1, 3, 4, 5)


def test_project_alignment_word_index_out_of_range():
    with pytest.raises(ValueError, match="word_index 4 out of range"):
        project_to_tokens([True], [WordAlignment(4, (0, 1))], 1)


def test_project_alignment_span_outside_steps():
    with pytest.raises(ValueError, match="outside"):
        project_to_tokens([True], [WordAlignment(0, (0, 5))], 2)


def test_mask_for_record_prefers_stored_tags():
    # words tag as content via the lexicon, but the stored tags say OTHER
    rec, _ = make_record([[1.0], [1.0]], tags=["OTHER", "OTHER"])
    rec.words = ["dog", "barks"]
    assert len(mask_for_record(rec)) == 0

    rec.word_pos = ["NN", "VBZ"]
    assert mask_for_record(rec).indices == (0, 1)


def test_mask_for_record_falls_back_to_lexicon():
    rec, _ = make_record([[1.0], [1.0], [1.0]])
    rec.words = ["the", "dog", "barks"]
    rec.word_pos = None
    assert mask_for_record(rec, default_lexicon()).indices == (1, 2)


def test_mask_for_record_with_alignment():
    rec, _ = make_record([[1.0], [1.0], [1.0]])
    rec.words = ["the", "dog"]
    rec.word_pos = ["OTHER", "NOUN"]
    rec.alignment = [WordAlignment(0, (0, 1)), WordAlignment(1, (1, 3))]
    assert mask_for_record(rec).indices == (1, 2)


def test_load_lexicon_from_files(tmp_path):
    lp = tmp_path / "lex.tsv"
    rp = tmp_path / "rules.tsv"
    lp.write_text("# comment\nfoo\tNOUN\nBar\tVERB\n")
    rp.write_text("zz\tADJ\n")
    lex = load_lexicon(str(lp), str(rp))
    assert tag_word("foo", lex) is PosTag.NOUN
    assert tag_word("bar", lex) is PosTag.VERB
    assert tag_word("fizz", lex) is PosTag.ADJ
    assert tag_word("baz", lex) is PosTag.OTHER


def test_load_lexicon_rejects_bad_tag(tmp_path):
    lp = tmp_path / "lex.tsv"
    rp = tmp_path / "rules.tsv"
    lp.write_text("foo\tNOUNISH\n")
    rp.write_text("")
    with pytest.raises(DataFormatError, match="unknown POS tag 'NOUNISH'"):
        load_lexicon(str(lp), str(rp))


def test_load_lexicon_rejects_bad_columns(tmp_path):
    lp = tmp_path / "lex.tsv"
    rp = tmp_path / "rules.tsv"
    lp.write_text("foo NOUN\n")
    rp.write_text("")
    with pytest.raises(DataFormatError, match="expected word<TAB>TAG"):
        load_lexicon(str(lp), str(rp))


def test_empty_suffix_rule_rejected():
    with pytest.raises(ValueError, match="empty suffix"):
        TagLexicon(entries={}, suffix_rules=(("", PosTag.ADJ),))


def test_default_lexicon_is_cached():
    assert default_lexicon() is default_lexicon()
