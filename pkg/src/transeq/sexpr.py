"""Minimal s-expression reader used by all text formats.

Atoms are maximal runs of characters other than whitespace and parentheses.
A semicolon starts a comment that runs to the end of the line.
"""

from dataclasses import dataclass


class ParseError(ValueError):
    """Malformed input, with a 1-based line and column."""

    def __init__(self, message, line=0, col=0):
        self.message = message
        self.line = line
        self.col = col
        super().__init__(f"{line}:{col}: {message}" if line else message)


@dataclass(frozen=True)
class Atom:
    text: str
    line: int = 0
    col: int = 0

    def __str__(self):
        return self.text


class SList(list):
    """A parenthesised list that remembers where it started."""

    def __init__(self, items=(), line=0, col=0):
        super().__init__(items)
        self.line = line
        self.col = col

    @property
    def head(self):
        if self and isinstance(self[0], Atom):
            return self[0].text
        return None


def tokenize(text):
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line, col = line + 1, 1
            i += 1
        elif ch.isspace():
            i += 1
            col += 1
        elif ch == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif ch in "()":
            yield ch, line, col
            i += 1
            col += 1
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in "();":
                j += 1
            yield text[i:j], line, col
            col += j - i
            i = j


def parse_all(text):
    """Parse every top-level expression in `text`."""
    stack = [SList()]
    for tok, line, col in tokenize(text):
        if tok == "(":
            stack.append(SList(line=line, col=col))
        elif tok == ")":
            if len(stack) == 1:
                raise ParseError("unbalanced ')'", line, col)
            done = stack.pop()
            stack[-1].append(done)
        else:
            stack[-1].append(Atom(tok, line, col))
    if len(stack) != 1:
        top = stack[-1]
        raise ParseError("missing ')'", top.line, top.col)
    return list(stack[0])


def parse_one(text):
    exprs = parse_all(text)
    if len(exprs) != 1:
        raise ParseError(f"expected one expression, found {len(exprs)}")
    return exprs[0]


def where(expr):
    return getattr(expr, "line", 0), getattr(expr, "col", 0)


def fail(expr, message):
    raise ParseError(message, *where(expr))


def atom(expr, what="atom"):
    if not isinstance(expr, Atom):
        fail(expr, f"expected {what}")
    return expr.text


def integer(expr, what="integer"):
    text = atom(expr, what)
    try:
        return int(text)
    except ValueError:
        fail(expr, f"expected {what}, got {text!r}")


def expect(expr, head, min_len=1):
    if not isinstance(expr, SList) or expr.head != head:
        fail(expr, f"expected ({head} ...)")
    if len(expr) < min_len:
        fail(expr, f"({head} ...) needs at least {min_len - 1} arguments")
    return expr
