"""Word-category lexicons and phrase-pattern rules for opinions and solicitations.

Lexicon file format, one category per line::

    anger: resent, argue, angry
    achieve: accompl*, ability, attain
    cogproc@pos=verb: believe, think

An entry ending in ``*`` is a stem and matches any token it prefixes.
Categories carrying ``@pos=verb|noun|adj`` drive part-of-speech tagging.

Pattern file format, one rule per line::

    label | name | slot;slot;...

with slots ``TAG(x)``, ``WORDS(a|b)`` and ``GAP(n)``.
"""

from __future__ import annotations

import enum
import functools
import logging
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence

log = logging.getLogger(__name__)

POS_SUFFIX = re.compile(r"^(?P<name>[\w\-]+)(?:@pos=(?P<pos>verb|noun|adj))?$")


@dataclass
class Lexicon:
    categories: dict[str, frozenset[str]] = field(default_factory=dict)
    pos: dict[tuple[str, str], frozenset[str]] = field(default_factory=dict)

    def __post_init__(self):
        self._split = {name: _split_entries(e) for name, e in self.categories.items()}
        self._pos_split = {key: _split_entries(e) for key, e in self.pos.items()}

    def has(self, category: str) -> bool:
        return category in self.categories

    def matches(self, category: str, token: str) -> bool:
        if category not in self._split:
            raise KeyError(f"unknown lexicon category {category!r}")
        return _entry_match(self._split[category], token)

    def pos_categories(self, token: str) -> list[tuple[str, str]]:
        """(category, pos) pairs whose entries match ``token``, in sorted order."""
        return [key for key in sorted(self._pos_split) if _entry_match(self._pos_split[key], token)]

    def merged(self, other: "Lexicon") -> "Lexicon":
        dup = set(self.categories) & set(other.categories) | set(self.pos) & set(other.pos)
        if dup:
            raise ValueError(f"duplicate lexicon categories: {sorted(map(str, dup))}")
        return Lexicon({**self.categories, **other.categories}, {**self.pos, **other.pos})


def _split_entries(entries: Iterable[str]) -> tuple[frozenset[str], tuple[str, ...]]:
    words = frozenset(e for e in entries if not e.endswith("*"))
    stems = tuple(sorted(e[:-1] for e in entries if e.endswith("*")))
    return words, stems


def _entry_match(split, token: str) -> bool:
    words, stems = split
    return token in words or any(token.startswith(s) for s in stems)


def parse_lexicon(lines: Iterable[str], source: str = "<lexicon>") -> Lexicon:
    categories: dict[str, frozenset[str]] = {}
    pos: dict[tuple[str, str], frozenset[str]] = {}
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, sep, body = line.partition(":")
        m = POS_SUFFIX.match(head.strip())
        if not sep or not m:
            raise ValueError(f"{source}:{lineno}: expected 'category: word, word'")
        entries = frozenset(w.strip().lower() for w in body.split(",") if w.strip())
        if not entries:
            log.warning("%s:%d: category %r is empty", source, lineno, head.strip())
        name, p = m.group("name").lower(), m.group("pos")
        if p is None:
            if name in categories:
                raise ValueError(f"{source}:{lineno}: duplicate category {name!r}")
            categories[name] = entries
        else:
            if (name, p) in pos:
                raise ValueError(f"{source}:{lineno}: duplicate category {name}@pos={p}")
            pos[(name, p)] = entries
    return Lexicon(categories, pos)


def load_lexicon(path) -> Lexicon:
    path = Path(path)
    with path.open(encoding="utf-8") as fh:
        return parse_lexicon(fh, str(path))


def load_lexicons(paths: Sequence) -> Lexicon:
    lex = Lexicon()
    for p in paths:
        lex = lex.merged(load_lexicon(p))
    return lex


@functools.lru_cache(maxsize=1)
def default_lexicon() -> Lexicon:
    text = resources.files("roleflow.data").joinpath("lexicon.txt").read_text(encoding="utf-8")
    return parse_lexicon(text.splitlines(), "lexicon.txt")


# -- tokenizing and tagging ------------------------------------------------------

TOKEN_RE = re.compile(r"[^\W_]+(?:'[^\W_]+)*|[.!?]+")
SENTENCE_END = re.compile(r"^[.!?]+$")


class Tag(str, enum.Enum):
    PRONOUN_FIRST_SUBJECTIVE = "PronounFirstSubjective"
    PRONOUN_FIRST_POSSESSIVE = "PronounFirstPossessive"
    PRONOUN_SECOND = "PronounSecond"
    PRONOUN_THIRD = "PronounThird"
    MODAL_VERB = "ModalVerb"
    AUXILIARY_VERB = "AuxiliaryVerb"
    NEGATION = "Negation"
    ADVERB = "Adverb"
    PROPER_NOUN = "ProperNoun"
    LEX_VERB = "LexVerb"
    LEX_NOUN = "LexNoun"
    LEX_ADJECTIVE = "LexAdjective"
    PLAIN = "Plain"


NEGATIONS = frozenset("""
    not no never nor cannot don't doesn't didn't won't wouldn't can't couldn't shouldn't
    isn't aren't wasn't weren't haven't hasn't hadn't mustn't mightn't ain't
""".split())
MODALS = frozenset("should must can could will might would may shall".split())
AUXILIARIES = frozenset("am is are was were be been being do does did have has had".split())
FIRST_SUBJECTIVE = frozenset("i we i'm we're i've we've i'd we'd i'll we'll".split())
FIRST_POSSESSIVE = frozenset("my mine our ours".split())
SECOND = frozenset("you your yours yourself yourselves you're you've you'll you'd".split())
THIRD = frozenset("""
    he she it they theirs his hers its their them him her he's she's it's they're they've they'll
""".split())
ADVERBS = frozenset("really definitely actually very".split())
# words that never count as proper nouns when they open a sentence
COMMON_OPENERS = frozenset("""
    a an the this that these those there here what when where why how who whom whose which
    and but or so if then yet because although though while as after before since until
    in on at for with to of from by about into over under between during without within
    yes ok okay hello hi hey thanks thank please let lets just also only even still now
    today tomorrow yesterday every each all some many most more much few any another other
    such one two three four five six seven eight nine ten first last next new great big
    breaking read watch look see check share join sign find learn
""".split())
DETERMINERS = frozenset("the a an this that these those my your our his her their its".split())

_POS_TAG = {"verb": Tag.LEX_VERB, "noun": Tag.LEX_NOUN, "adj": Tag.LEX_ADJECTIVE}


class Token(NamedTuple):
    surface: str
    lower: str
    tag: Tag
    category: str | None
    sentence: int

    def tag_name(self) -> str:
        return f"{self.tag.value}:{self.category}" if self.category else self.tag.value


@dataclass
class TokenStream:
    tokens: list[Token]

    def tags(self) -> list[str]:
        return [t.tag_name() for t in self.tokens]

    def sentences(self) -> list[list[Token]]:
        out: dict[int, list[Token]] = {}
        for t in self.tokens:
            out.setdefault(t.sentence, []).append(t)
        return list(out.values())


def tokenize(text: str) -> list[str]:
    """Word tokens, with internal apostrophes kept ("don't" stays one token)."""
    return [t for t in TOKEN_RE.findall(_normalize(text)) if not SENTENCE_END.match(t)]


def _normalize(text: str) -> str:
    return text.replace("’", "'").replace("‘", "'")


def _lex_tag(lower: str, lexicon: Lexicon, prev: Sequence[str]) -> tuple[Tag, str] | None:
    hits = lexicon.pos_categories(lower)
    if not hits:
        return None
    by_pos: dict[str, str] = {}
    for cat, p in hits:
        by_pos.setdefault(p, cat)
    if len(by_pos) > 1:
        # noun reading after a determiner or possessive within two tokens
        if "noun" in by_pos and any(w in DETERMINERS for w in prev[-2:]):
            return Tag.LEX_NOUN, by_pos["noun"]
        for p in ("verb", "noun", "adj"):
            if p in by_pos:
                return _POS_TAG[p], by_pos[p]
    p, cat = next(iter(by_pos.items()))
    return _POS_TAG[p], cat


def tokenize_and_tag(text: str, lexicon: Lexicon | None = None) -> TokenStream:
    """Tag each token with exactly one class.

    Priority: negation, modal, auxiliary, pronouns, lexicon part of speech,
    adverb, proper noun, plain.
    """
    lexicon = lexicon if lexicon is not None else default_lexicon()
    tokens: list[Token] = []
    sentence, at_start = 0, True
    prev: list[str] = []
    for surface in TOKEN_RE.findall(_normalize(text)):
        if SENTENCE_END.match(surface):
            if not at_start:
                sentence += 1
            at_start, prev = True, []
            continue
        lower = surface.lower()
        cat = None
        if lower in NEGATIONS:
            tag = Tag.NEGATION
        elif lower in MODALS:
            tag = Tag.MODAL_VERB
        elif lower in AUXILIARIES:
            tag = Tag.AUXILIARY_VERB
        elif lower in FIRST_SUBJECTIVE:
            tag = Tag.PRONOUN_FIRST_SUBJECTIVE
        elif lower in FIRST_POSSESSIVE:
            tag = Tag.PRONOUN_FIRST_POSSESSIVE
        elif lower in SECOND:
            tag = Tag.PRONOUN_SECOND
        elif lower in THIRD:
            tag = Tag.PRONOUN_THIRD
        elif (lex := _lex_tag(lower, lexicon, prev)) is not None:
            tag, cat = lex
        elif lower in ADVERBS or (lower.endswith("ly") and len(lower) > 3):
            tag = Tag.ADVERB
        elif _is_proper(surface, lower, at_start):
            tag = Tag.PROPER_NOUN
        else:
            tag = Tag.PLAIN
        tokens.append(Token(surface, lower, tag, cat, sentence))
        prev.append(lower)
        at_start = False
    return TokenStream(tokens)


def _is_proper(surface: str, lower: str, at_start: bool) -> bool:
    if not surface[0].isupper():
        return False
    if not at_start:
        return True
    if len(surface) > 1 and surface.isupper():
        return True
    return lower not in COMMON_OPENERS


def category_proportion(text: str, lexicon: Lexicon, category: str) -> float:
    if not lexicon.has(category):
        raise KeyError(f"unknown lexicon category {category!r}")
    toks = [t.lower() for t in tokenize(text)]
    if not toks:
        return 0.0
    return sum(lexicon.matches(category, t) for t in toks) / len(toks)


def category_counts(text: str, lexicon: Lexicon, categories: Sequence[str]) -> tuple[list[int], int]:
    """Per-category match counts and the token total for ``text``."""
    for c in categories:
        if not lexicon.has(c):
            raise KeyError(f"unknown lexicon category {c!r}")
    toks = [t.lower() for t in tokenize(text)]
    return [sum(lexicon.matches(c, t) for t in toks) for c in categories], len(toks)


# -- pattern rules -----------------------------------------------------------------

class Label(str, enum.Enum):
    OPINION = "opinion"
    SOLICITATION = "solicitation"


@dataclass(frozen=True)
class TagClass:
    tag: Tag
    category: str | None = None

    def accepts(self, tok: Token) -> bool:
        return tok.tag is self.tag and (self.category is None or tok.category == self.category)


@dataclass(frozen=True)
class WordSet:
    words: frozenset[str]

    def accepts(self, tok: Token) -> bool:
        return tok.lower in self.words


@dataclass(frozen=True)
class OptionalModifiers:
    max_gap: int = 2


Slot = TagClass | WordSet | OptionalModifiers


@dataclass(frozen=True)
class PatternRule:
    name: str
    slots: tuple[Slot, ...]
    label: Label

    def __post_init__(self):
        if not any(not isinstance(s, OptionalModifiers) for s in self.slots):
            raise ValueError(f"rule {self.name!r} has no required slot")
        for s in self.slots:
            if isinstance(s, OptionalModifiers) and not 0 <= s.max_gap <= 3:
                raise ValueError(f"rule {self.name!r}: gap {s.max_gap} outside 0..3")

    def matches(self, sentence: Sequence[Token]) -> bool:
        return any(self._match_at(sentence, i, 0) for i in range(len(sentence)))

    def _match_at(self, toks: Sequence[Token], i: int, j: int) -> bool:
        if j == len(self.slots):
            return True
        slot = self.slots[j]
        if isinstance(slot, OptionalModifiers):
            return any(self._match_at(toks, i + g, j + 1)
                       for g in range(slot.max_gap + 1) if i + g <= len(toks))
        if i < len(toks) and slot.accepts(toks[i]):
            return self._match_at(toks, i + 1, j + 1)
        return False


SLOT_RE = re.compile(r"^(TAG|WORDS|GAP)\((.*)\)$")


def parse_slot(text: str) -> Slot:
    m = SLOT_RE.match(text.strip())
    if not m:
        raise ValueError(f"bad slot {text!r}")
    kind, arg = m.group(1), m.group(2).strip()
    if kind == "GAP":
        return OptionalModifiers(int(arg) if arg else 2)
    if kind == "WORDS":
        words = frozenset(w.strip().lower() for w in arg.split("|") if w.strip())
        if not words:
            raise ValueError(f"empty word set in {text!r}")
        return WordSet(words)
    name, _, cat = arg.partition(":")
    return TagClass(Tag(name), cat.lower() or None)


def parse_rules(lines: Iterable[str], source: str = "<rules>") -> list[PatternRule]:
    rules, names = [], set()
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            label, name, slots = (p.strip() for p in line.split("|", 2))
            rule = PatternRule(name, tuple(parse_slot(s) for s in slots.split(";") if s.strip()),
                               Label(label.lower()))
        except ValueError as exc:
            raise ValueError(f"{source}:{lineno}: {exc}") from None
        if name in names:
            raise ValueError(f"{source}:{lineno}: duplicate rule name {name!r}")
        names.add(name)
        rules.append(rule)
    return rules


def load_rules(path) -> list[PatternRule]:
    path = Path(path)
    with path.open(encoding="utf-8") as fh:
        return parse_rules(fh, str(path))


def default_rules() -> list[PatternRule]:
    text = resources.files("roleflow.data").joinpath("patterns.txt").read_text(encoding="utf-8")
    return parse_rules(text.splitlines(), "patterns.txt")


def match_patterns(stream: TokenStream, rules: Sequence[PatternRule]) -> set[str]:
    sentences = stream.sentences()
    return {r.name for r in rules if any(r.matches(s) for s in sentences)}


def strategy_flags(text: str, rules: Sequence[PatternRule], lexicon: Lexicon | None = None) -> tuple[bool, bool]:
    """(has_opinion, has_solicitation) for one post text."""
    hit = match_patterns(tokenize_and_tag(text, lexicon), rules)
    labels = {r.label for r in rules if r.name in hit}
    return Label.OPINION in labels, Label.SOLICITATION in labels
