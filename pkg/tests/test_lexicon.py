import logging

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from goldens import CONTROLS, OPINION, SOLICITATION
from roleflow.lexicon import (
    Label,
    OptionalModifiers,
    PatternRule,
    Tag,
    TagClass,
    WordSet,
    category_proportion,
    default_lexicon,
    default_rules,
    load_lexicon,
    load_lexicons,
    match_patterns,
    parse_lexicon,
    parse_rules,
    parse_slot,
    strategy_flags,
    tokenize,
    tokenize_and_tag,
)

LEX = default_lexicon()
RULES = default_rules()


def tags(text):
    return tokenize_and_tag(text, LEX).tags()


class TestLexiconFile:
    def test_anger_category(self, tmp_path):
        p = tmp_path / "l.txt"
        p.write_text("anger: resent, argue, angry\n", encoding="utf-8")
        lex = load_lexicon(p)
        assert lex.categories["anger"] == {"resent", "argue", "angry"}

    def test_stem_wildcard(self):
        lex = parse_lexicon(["achieve: accompl*"])
        assert lex.matches("achieve", "accomplished")
        assert not lex.matches("achieve", "accomp")

    def test_empty_category_warns(self, caplog):
        with caplog.at_level(logging.WARNING):
            lex = parse_lexicon(["anger:"])
        assert lex.categories["anger"] == frozenset()
        assert "empty" in caplog.text

    def test_duplicate_entries_collapse(self):
        assert parse_lexicon(["we: we, We, we"]).categories["we"] == {"we"}

    def test_duplicate_category_fatal(self):
        with pytest.raises(ValueError, match="duplicate"):
            parse_lexicon(["anger: a", "anger: b"])

    def test_duplicate_across_files_fatal(self, tmp_path):
        for name in ("a.txt", "b.txt"):
            (tmp_path / name).write_text("risk: danger\n", encoding="utf-8")
        with pytest.raises(ValueError):
            load_lexicons([tmp_path / "a.txt", tmp_path / "b.txt"])

    def test_pos_categories(self):
        lex = parse_lexicon(["cogproc@pos=verb: think", "cogproc@pos=noun: thought"])
        assert lex.pos_categories("think") == [("cogproc", "verb")]
        assert not lex.has("cogproc")

    def test_malformed_line(self):
        with pytest.raises(ValueError):
            parse_lexicon(["no colon here"])

    def test_shipped_lexicon_has_drive_categories(self):
        for c in ("fairness", "achieve", "we", "anger", "risk", "reward"):
            assert LEX.has(c)


class TestCategoryProportion:
    def test_two_of_ten(self):
        text = "they resent the rules and argue about every single point"
        assert len(tokenize(text)) == 10
        assert category_proportion(text, LEX, "anger") == pytest.approx(0.2)

    def test_empty_text(self):
        assert category_proportion("", LEX, "anger") == 0.0
        assert category_proportion("... !!", LEX, "anger") == 0.0

    def test_all_match(self):
        assert category_proportion("Angry, resent; ARGUE!", LEX, "anger") == 1.0

    def test_unknown_category(self):
        with pytest.raises(KeyError):
            category_proportion("text", LEX, "nonexistent")

    @given(st.text(max_size=80))
    def test_bounded(self, text):
        for c in ("anger", "risk", "we"):
            assert 0.0 <= category_proportion(text, LEX, c) <= 1.0


class TestTokenizer:
    def test_apostrophes_kept(self):
        assert tokenize("We don’t think it's over.") == ["We", "don't", "think", "it's", "over"]

    def test_unicode_letters(self):
        assert tokenize("Ça va, Zoë?") == ["Ça", "va", "Zoë"]

    def test_i_believe(self):
        assert tags("I believe") == ["PronounFirstSubjective", "LexVerb:cogproc"]

    def test_please_donate(self):
        stream = tokenize_and_tag("Please donate", LEX)
        assert stream.tokens[0].lower == "please"
        assert stream.tags()[1] == "LexVerb:social"

    def test_trump_should(self):
        assert tags("Trump should") == ["ProperNoun", "ModalVerb"]

    def test_priority_negation_over_aux(self):
        assert tags("we don't") == ["PronounFirstSubjective", "Negation"]

    def test_common_opener_is_not_proper(self):
        assert tags("The rally")[0] == "Plain"
        assert tags("we saw Hillary")[2] == "ProperNoun"

    def test_adverbs(self):
        assert tags("really quickly fly") == ["Adverb", "Adverb", "Plain"]

    def test_noun_reading_after_determiner(self):
        assert tags("call them")[0] == "LexVerb:social"
        assert tags("your timely call")[-1] == "LexNoun:social"

    def test_sentences_split(self):
        stream = tokenize_and_tag("You can. Help us!", LEX)
        assert [len(s) for s in stream.sentences()] == [2, 2]


class TestRules:
    def test_slot_syntax(self):
        assert parse_slot("TAG(LexVerb:social)") == TagClass(Tag.LEX_VERB, "social")
        assert parse_slot("WORDS(a|B)") == WordSet(frozenset({"a", "b"}))
        assert parse_slot("GAP(3)") == OptionalModifiers(3)

    @pytest.mark.parametrize("line", [
        "opinion | r | GAP(2)",
        "opinion | r | TAG(ModalVerb);GAP(4)",
        "opinion | r | TAG(NotATag)",
        "feeling | r | TAG(ModalVerb)",
        "opinion | r | BOGUS(x)",
    ])
    def test_invalid_rules(self, line):
        with pytest.raises(ValueError):
            parse_rules([line])

    def test_duplicate_rule_name(self):
        with pytest.raises(ValueError, match="duplicate"):
            parse_rules(["opinion | r | TAG(ModalVerb)", "solicitation | r | TAG(ModalVerb)"])

    def test_we_dont_think(self):
        assert "first-subjective-cogproc-verb" in match_patterns(tokenize_and_tag("We don't think", LEX), RULES)

    def test_sign_the_petition(self):
        assert "social-verb-social-noun" in match_patterns(tokenize_and_tag("Sign the petition", LEX), RULES)

    def test_order_matters(self):
        assert match_patterns(tokenize_and_tag("the petition sign", LEX), RULES) == set()

    def test_gap_limit(self):
        assert "first-subjective-cogproc-verb" in match_patterns(tokenize_and_tag("I really do believe"), RULES)
        assert match_patterns(tokenize_and_tag("I went out and later believe"), RULES) == set()

    def test_no_match_across_sentences(self):
        assert match_patterns(tokenize_and_tag("They left. Should we?", LEX), RULES) == set()

    @pytest.mark.parametrize("text,rule", sorted({**OPINION, **SOLICITATION}.items()))
    def test_goldens(self, text, rule):
        assert rule in match_patterns(tokenize_and_tag(text, LEX), RULES)

    @pytest.mark.parametrize("text", CONTROLS)
    def test_controls(self, text):
        assert match_patterns(tokenize_and_tag(text, LEX), RULES) == set()


class TestStrategyFlags:
    def test_examples(self):
        assert strategy_flags("Will you sign this petition?", RULES) == (False, True)
        assert strategy_flags("My strong opinion is...", RULES) == (True, False)
        assert strategy_flags("The weather is nice.", RULES) == (False, False)

    def test_both(self):
        assert strategy_flags("I believe you should donate.", RULES) == (True, True)


sentences = st.sampled_from(sorted(OPINION) + sorted(SOLICITATION) + CONTROLS)
CASE_FREE = [r for r in RULES if not any(isinstance(s, TagClass) and s.tag is Tag.PROPER_NOUN for s in r.slots)]


class TestProperties:
    @given(sentences)
    def test_case_invariance_without_proper_nouns(self, text):
        base = match_patterns(tokenize_and_tag(text, LEX), CASE_FREE)
        assert match_patterns(tokenize_and_tag(text.lower(), LEX), CASE_FREE) == base

    @given(sentences, st.sampled_from(["", ".", "!", "?", "...", "?!"]))
    def test_trailing_punctuation_invariance(self, text, punct):
        stripped = text.rstrip(".!?")
        assert match_patterns(tokenize_and_tag(stripped + punct, LEX), RULES) == \
            match_patterns(tokenize_and_tag(stripped, LEX), RULES)

    @settings(max_examples=50)
    @given(sentences, st.lists(st.sampled_from(RULES), unique_by=lambda r: r.name))
    def test_adding_rules_keeps_matches(self, text, extra):
        stream = tokenize_and_tag(text, LEX)
        names = {r.name for r in extra}
        base = [r for r in RULES if r.name not in names][:4]
        before = match_patterns(stream, base)
        assert before <= match_patterns(stream, base + extra)

    @given(st.text(max_size=60))
    def test_one_tag_per_token(self, text):
        stream = tokenize_and_tag(text, LEX)
        assert len(stream.tokens) == len(tokenize(text))
        assert all(isinstance(t.tag, Tag) for t in stream.tokens)


def test_rule_requires_non_gap_slot():
    with pytest.raises(ValueError):
        PatternRule("x", (OptionalModifiers(1),), Label.OPINION)
