"""Theme rules: a small boolean phrase language that tags gazette acts.

A rule file declares one block per theme::

    # comments run to end of line
    theme "Amazon Region" {
      include: "amazônia" OR "amazonia"
      exclude: "previsão do tempo"
    }

Operator precedence is NOT > AND > OR; parentheses group. Phrases match
case- and accent-insensitively against whole-token runs: a phrase of k
words matches k consecutive document tokens, so "clima" never matches
inside "climático".
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import DuplicateTheme, RuleSyntaxError
from .features import token_spans, tokenize
from .ingest import NormalizedText, RawDocument, normalize


class RuleExpr:
    """Base class for rule expression nodes."""

    __slots__ = ()


@dataclass(frozen=True)
class Phrase(RuleExpr):
    text: str


@dataclass(frozen=True)
class And(RuleExpr):
    left: RuleExpr
    right: RuleExpr


@dataclass(frozen=True)
class Or(RuleExpr):
    left: RuleExpr
    right: RuleExpr


@dataclass(frozen=True)
class Not(RuleExpr):
    inner: RuleExpr


@dataclass(frozen=True)
class ThemeRule:
    theme_name: str
    include: RuleExpr
    exclude: RuleExpr | None = None


@dataclass(frozen=True)
class RuleSet:
    rules: tuple[ThemeRule, ...]
    version: str

    def theme_names(self) -> list[str]:
        return [r.theme_name for r in self.rules]


# ---------------------------------------------------------------------------
# Lexer

@dataclass(frozen=True)
class _Tok:
    kind: str
    value: str
    line: int
    col: int

    def describe(self) -> str:
        if self.kind == "eof":
            return "end of input"
        if self.kind == "string":
            return f'"{self.value}"'
        return f"'{self.value}'"


_PUNCT = {"{": "lbrace", "}": "rbrace", "(": "lparen", ")": "rparen"}
_WORDS = {"theme": "theme", "AND": "and", "OR": "or", "NOT": "not"}


def _lex(source: str) -> list[_Tok]:
    toks: list[_Tok] = []
    line, col = 1, 1
    i, n = 0, len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and source[i] != "\n":
                i += 1
            continue
        if ch in _PUNCT:
            toks.append(_Tok(_PUNCT[ch], ch, line, col))
            i += 1
            col += 1
            continue
        if ch == '"':
            start_line, start_col = line, col
            i += 1
            col += 1
            buf: list[str] = []
            while True:
                if i >= n or source[i] == "\n":
                    raise RuleSyntaxError(
                        start_line, start_col, "closing quote", "end of line"
                    )
                c = source[i]
                if c == "\\" and i + 1 < n and source[i + 1] in ('"', "\\"):
                    buf.append(source[i + 1])
                    i += 2
                    col += 2
                    continue
                if c == '"':
                    i += 1
                    col += 1
                    break
                buf.append(c)
                i += 1
                col += 1
            toks.append(_Tok("string", "".join(buf), start_line, start_col))
            continue
        if ch.isalpha():
            start_col = col
            j = i
            while j < n and source[j].isalpha():
                j += 1
            word = source[i:j]
            col += j - i
            i = j
            if word in ("include", "exclude") and i < n and source[i] == ":":
                toks.append(_Tok(word, word + ":", line, start_col))
                i += 1
                col += 1
            elif word in _WORDS:
                toks.append(_Tok(_WORDS[word], word, line, start_col))
            else:
                toks.append(_Tok("word", word, line, start_col))
            continue
        raise RuleSyntaxError(line, col, "a rule token", repr(ch))
    toks.append(_Tok("eof", "", line, col))
    return toks


# ---------------------------------------------------------------------------
# Parser (recursive descent; one token of lookahead)

class _Parser:
    def __init__(self, toks: list[_Tok]):
        self._toks = toks
        self._pos = 0

    @property
    def tok(self) -> _Tok:
        return self._toks[self._pos]

    def _advance(self) -> _Tok:
        tok = self.tok
        self._pos += 1
        return tok

    def _expect(self, kind: str, expected: str) -> _Tok:
        if self.tok.kind != kind:
            raise RuleSyntaxError(
                self.tok.line, self.tok.col, expected, self.tok.describe()
            )
        return self._advance()

    def ruleset(self) -> list[ThemeRule]:
        rules: list[ThemeRule] = []
        while self.tok.kind != "eof":
            rules.append(self.theme())
        return rules

    def theme(self) -> ThemeRule:
        self._expect("theme", "'theme'")
        name_tok = self._expect("string", "a quoted theme name")
        name = normalize(name_tok.value).text
        if not name:
            raise RuleSyntaxError(
                name_tok.line, name_tok.col, "a non-empty theme name", '""'
            )
        self._expect("lbrace", "'{'")
        self._expect("include", "'include:'")
        include = self.expr()
        exclude = None
        if self.tok.kind == "exclude":
            self._advance()
            exclude = self.expr()
        self._expect("rbrace", "'}'")
        return ThemeRule(theme_name=name, include=include, exclude=exclude)

    def expr(self) -> RuleExpr:
        return self._or()

    def _or(self) -> RuleExpr:
        node = self._and()
        while self.tok.kind == "or":
            self._advance()
            node = Or(node, self._and())
        return node

    def _and(self) -> RuleExpr:
        node = self._not()
        while self.tok.kind == "and":
            self._advance()
            node = And(node, self._not())
        return node

    def _not(self) -> RuleExpr:
        tok = self.tok
        if tok.kind == "not":
            self._advance()
            return Not(self._not())
        if tok.kind == "lparen":
            self._advance()
            node = self.expr()
            self._expect("rparen", "')'")
            return node
        if tok.kind == "string":
            self._advance()
            phrase = normalize(tok.value).text
            if not phrase:
                raise RuleSyntaxError(tok.line, tok.col, "a non-empty phrase", '""')
            return Phrase(phrase)
        raise RuleSyntaxError(
            tok.line, tok.col, "a phrase, 'NOT', or '('", tok.describe()
        )


def parse_rules(source: str) -> RuleSet:
    """Parse rule-file text into a RuleSet.

    Raises RuleSyntaxError with 1-based line/column on any malformed
    input and DuplicateTheme when a theme name repeats.
    """
    parser = _Parser(_lex(source))
    rules = parser.ruleset()
    seen: set[str] = set()
    for rule in rules:
        if rule.theme_name in seen:
            raise DuplicateTheme(rule.theme_name)
        seen.add(rule.theme_name)
    version = hashlib.sha256(source.encode("utf-8")).hexdigest()[:12]
    return RuleSet(rules=tuple(rules), version=version)


def load_rules(path: str | Path) -> RuleSet:
    return parse_rules(Path(path).read_text(encoding="utf-8"))


def load_demo_rules() -> RuleSet:
    """The small rule set shipped with the package, for demos and defaults."""
    source = resources.files(__package__).joinpath("data/demo.rules").read_text("utf-8")
    return parse_rules(source)


# ---------------------------------------------------------------------------
# Pretty printer

def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _fmt(expr: RuleExpr, min_prec: int = 0) -> str:
    # Right operands of a binary node are wrapped at equal precedence so
    # re-parsing rebuilds the identical tree.
    if isinstance(expr, Phrase):
        text, prec = _quote(expr.text), 4
    elif isinstance(expr, Not):
        text, prec = "NOT " + _fmt(expr.inner, 3), 3
    elif isinstance(expr, And):
        text, prec = _fmt(expr.left, 2) + " AND " + _fmt(expr.right, 3), 2
    elif isinstance(expr, Or):
        text, prec = _fmt(expr.left, 1) + " OR " + _fmt(expr.right, 2), 1
    else:
        raise TypeError(f"not a rule expression: {expr!r}")
    if prec < min_prec:
        return "(" + text + ")"
    return text


def format_expr(expr: RuleExpr) -> str:
    return _fmt(expr)


def format_rules(ruleset: RuleSet) -> str:
    """Canonical text form; parse(format_rules(rs)) rebuilds rs.rules."""
    blocks = []
    for rule in ruleset.rules:
        lines = [f"theme {_quote(rule.theme_name)} {{"]
        lines.append(f"  include: {format_expr(rule.include)}")
        if rule.exclude is not None:
            lines.append(f"  exclude: {format_expr(rule.exclude)}")
        lines.append("}")
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"


# ---------------------------------------------------------------------------
# Evaluation

def _contains(hay: list[str], needle: list[str]) -> bool:
    n = len(needle)
    if n == 0 or n > len(hay):
        return False
    return any(hay[i : i + n] == needle for i in range(len(hay) - n + 1))


def _eval(expr: RuleExpr, doc_tokens: list[str]) -> bool:
    if isinstance(expr, Phrase):
        return _contains(doc_tokens, tokenize(expr.text))
    if isinstance(expr, And):
        return _eval(expr.left, doc_tokens) and _eval(expr.right, doc_tokens)
    if isinstance(expr, Or):
        return _eval(expr.left, doc_tokens) or _eval(expr.right, doc_tokens)
    if isinstance(expr, Not):
        return not _eval(expr.inner, doc_tokens)
    raise TypeError(f"not a rule expression: {expr!r}")


def _matches(rule: ThemeRule, doc_tokens: list[str]) -> bool:
    if not _eval(rule.include, doc_tokens):
        return False
    return rule.exclude is None or not _eval(rule.exclude, doc_tokens)


def match_theme(rule: ThemeRule, doc_text: NormalizedText | str) -> bool:
    """True iff the include expression holds and the exclude one (if any)
    does not."""
    return _matches(rule, tokenize(doc_text))


def pre_classify(rules: RuleSet, doc: RawDocument) -> list[str]:
    """Names of every theme matching the document body, in rule order.

    An empty list means the act is not routed to human review.
    """
    doc_tokens = tokenize(doc.body)
    return [r.theme_name for r in rules.rules if _matches(r, doc_tokens)]


def _positive_phrases(expr: RuleExpr, positive: bool = True) -> list[Phrase]:
    if isinstance(expr, Phrase):
        return [expr] if positive else []
    if isinstance(expr, Not):
        return _positive_phrases(expr.inner, not positive)
    if isinstance(expr, (And, Or)):
        return _positive_phrases(expr.left, positive) + _positive_phrases(
            expr.right, positive
        )
    raise TypeError(f"not a rule expression: {expr!r}")


def merge_spans(spans: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """Sort [start, end) spans and fuse the overlapping ones."""
    merged: list[tuple[int, int]] = []
    for start, end in sorted(spans):
        if merged and start < merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], end))
        else:
            merged.append((start, end))
    return merged


def match_spans(rule: ThemeRule, text: NormalizedText | str) -> list[tuple[int, int]]:
    """Character spans occupied by the rule's positive include phrases.

    Spans refer to the given (normalized) text; overlapping hits are
    merged. Used by review front ends to highlight why an act matched.
    """
    raw = text.text if isinstance(text, NormalizedText) else text
    spans = token_spans(raw)
    folded = [t for t, _, _ in spans]
    hits: list[tuple[int, int]] = []
    for phrase in _positive_phrases(rule.include):
        needle = tokenize(phrase.text)
        n = len(needle)
        if n == 0 or n > len(folded):
            continue
        for i in range(len(folded) - n + 1):
            if folded[i : i + n] == needle:
                hits.append((spans[i][1], spans[i + n - 1][2]))
    return merge_spans(hits)
