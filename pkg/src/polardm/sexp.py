"""Minimal s-expression reader/writer shared by every text format.

Atoms remember their source position so that later semantic passes
(symbol lookup, sort checking) can report errors that point back into
the input text.  `;` starts a comment that runs to end of line.
"""

from __future__ import annotations


class SexpError(Exception):
    """Malformed input, with a source position when one is known."""

    def __init__(self, message, line=None, col=None):
        if line is not None:
            message = f"{message} (line {line}, column {col})"
        super().__init__(message)
        self.line = line
        self.col = col


def error_at(message, node):
    """Build a SexpError located at `node` (an SAtom or SList)."""
    line = getattr(node, "line", None)
    col = getattr(node, "col", None)
    return SexpError(message, line, col)


class SAtom(str):
    """A bare token; compares and hashes like the plain string."""

    def __new__(cls, value, line=None, col=None):
        self = super().__new__(cls, value)
        self.line = line
        self.col = col
        return self


class SList(list):
    """A parenthesised group of atoms and sub-lists."""

    def __init__(self, items=(), line=None, col=None):
        super().__init__(items)
        self.line = line
        self.col = col


_STOP = set("();")


def _tokens(text):
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
        elif ch.isspace():
            col += 1
            i += 1
        elif ch == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif ch in "()":
            yield ch, line, col
            col += 1
            i += 1
        else:
            start, sl, sc = i, line, col
            while i < n and not text[i].isspace() and text[i] not in _STOP:
                i += 1
                col += 1
            yield text[start:i], sl, sc


def loads(text):
    """Parse `text` into a list of top-level s-expressions."""
    stack = [SList()]
    for tok, line, col in _tokens(text):
        if tok == "(":
            new = SList((), line, col)
            stack[-1].append(new)
            stack.append(new)
        elif tok == ")":
            if len(stack) == 1:
                raise SexpError("unbalanced ')'", line, col)
            stack.pop()
        else:
            stack[-1].append(SAtom(tok, line, col))
    if len(stack) != 1:
        raise SexpError("unclosed '(' at end of input", stack[-1].line, stack[-1].col)
    return list(stack[0])


def loads_one(text):
    """Parse exactly one s-expression."""
    nodes = loads(text)
    if len(nodes) != 1:
        raise SexpError(f"expected a single expression, found {len(nodes)}")
    return nodes[0]


def dumps(node, pretty=False, width=72):
    """Render a nested list/str structure back to text."""
    if pretty:
        return _pretty(node, 0, width)
    return _flat(node)


def _flat(node):
    if isinstance(node, str):
        return str(node)
    return "(" + " ".join(_flat(x) for x in node) + ")"


def _pretty(node, indent, width):
    flat = _flat(node)
    if isinstance(node, str) or len(flat) + indent <= width:
        return flat
    pad = " " * (indent + 2)
    head = _flat(node[0]) if node else ""
    lines = [f"({head}"]
    for child in node[1:]:
        lines.append(pad + _pretty(child, indent + 2, width))
    lines[-1] += ")"
    return "\n".join(lines)
