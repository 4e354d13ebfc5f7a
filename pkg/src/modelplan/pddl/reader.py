"""Tokenizer and S-expression reader for PDDL text."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..diagnostics import Diagnostic, error

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>;[^\n]*)
  | (?P<lparen>\()
  | (?P<rparen>\))
  | (?P<number>-?\d+(?:\.\d+)?(?:[eE][-+]?\d+)?(?![A-Za-z0-9_.?-]))
  | (?P<variable>\?[A-Za-z][A-Za-z0-9_-]*)
  | (?P<keyword>:[A-Za-z][A-Za-z0-9_-]*)
  | (?P<name>[A-Za-z][A-Za-z0-9_-]*)
  | (?P<dash>-(?![A-Za-z0-9_.?-]))
  | (?P<equals>=)
    """,
    re.VERBOSE,
)
_JUNK = re.compile(r"[^\s();]+")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


@dataclass
class SExpr:
    items: list = field(default_factory=list)
    line: int = 0
    column: int = 0


class ReadError(Exception):
    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = diagnostics
        super().__init__(diagnostics[0].render() if diagnostics else "read error")


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    diags: list[Diagnostic] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            junk = _JUNK.match(text, pos)
            end = junk.end() if junk else pos + 1
            diags.append(error("pddl.lex", f"unexpected token {text[pos:end]!r}", line=line, column=col))
            pos = end
            continue
        kind = m.lastgroup
        chunk = m.group()
        if kind not in ("ws", "comment"):
            tokens.append(Token(kind, chunk, line, col))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    if diags:
        raise ReadError(diags)
    return tokens


def read(text: str) -> list[SExpr]:
    """Read all top-level expressions; atoms outside parentheses are an error."""
    tokens = tokenize(text)
    stack: list[SExpr] = []
    top: list[SExpr] = []
    for tok in tokens:
        if tok.kind == "lparen":
            stack.append(SExpr([], tok.line, tok.column))
        elif tok.kind == "rparen":
            if not stack:
                raise ReadError([error("pddl.syntax", "unbalanced ')'", line=tok.line, column=tok.column)])
            done = stack.pop()
            (stack[-1].items if stack else top).append(done)
        elif stack:
            stack[-1].items.append(tok)
        else:
            raise ReadError(
                [error("pddl.syntax", f"{tok.text!r} outside of any expression", line=tok.line, column=tok.column)]
            )
    if stack:
        open_ = stack[-1]
        raise ReadError([error("pddl.syntax", "unclosed '('", line=open_.line, column=open_.column)])
    return top
