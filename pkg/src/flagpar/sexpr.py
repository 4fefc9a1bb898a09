"""Tiny s-expression reader/printer.

Used for the cut-set serialization grammar and scenario files.  Values are
nested Python lists whose atoms are ints, Fractions, or symbol strings.
Double-quoted strings parse to ("str", value) pairs so that symbols and
strings stay distinguishable on round trip.

print -> parse is the identity on the value level, and parse -> print -> parse
is the identity on text produced by this module.
"""

from fractions import Fraction


class SexprError(ValueError):
    pass


def tokenize(text):
    toks = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c in " \t\r\n":
            i += 1
        elif c == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif c in "()":
            toks.append(c)
            i += 1
        elif c == '"':
            j = i + 1
            out = []
            while j < n and text[j] != '"':
                if text[j] == "\\" and j + 1 < n:
                    out.append(text[j + 1])
                    j += 2
                else:
                    out.append(text[j])
                    j += 1
            if j >= n:
                raise SexprError("unterminated string")
            toks.append(("str", "".join(out)))
            i = j + 1
        else:
            j = i
            while j < n and text[j] not in ' \t\r\n();"':
                j += 1
            toks.append(text[i:j])
            i = j
    return toks


def _atom(tok):
    if isinstance(tok, tuple):
        return tok  # ("str", ...)
    try:
        return int(tok)
    except ValueError:
        pass
    if "/" in tok:
        try:
            return Fraction(tok)
        except ValueError:
            pass
    return tok  # symbol


def parse(text):
    """Parse exactly one s-expression."""
    toks = tokenize(text)
    val, rest = _parse_tokens(toks)
    if rest:
        raise SexprError("trailing tokens after s-expression")
    return val


def parse_many(text):
    toks = tokenize(text)
    out = []
    while toks:
        val, toks = _parse_tokens(toks)
        out.append(val)
    return out


def _parse_tokens(toks):
    if not toks:
        raise SexprError("unexpected end of input")
    tok = toks[0]
    if tok == "(":
        items = []
        rest = toks[1:]
        while True:
            if not rest:
                raise SexprError("unterminated list")
            if rest[0] == ")":
                return items, rest[1:]
            item, rest = _parse_tokens(rest)
            items.append(item)
    if tok == ")":
        raise SexprError("unexpected )")
    return _atom(tok), toks[1:]


def _print_atom(v):
    if isinstance(v, tuple) and len(v) == 2 and v[0] == "str":
        s = v[1].replace("\\", "\\\\").replace('"', '\\"')
        return '"%s"' % s
    if isinstance(v, bool):
        raise SexprError("booleans are not atoms; use symbols")
    if isinstance(v, (int, Fraction)):
        return str(v)
    if isinstance(v, str):
        if not v or any(c in ' \t\r\n();"' for c in v):
            raise SexprError("bad symbol: %r" % (v,))
        return v
    raise SexprError("not an s-expression atom: %r" % (v,))


def dump(value):
    """Print one s-expression on one line."""
    if isinstance(value, list):
        return "(" + " ".join(dump(v) for v in value) + ")"
    return _print_atom(value)


def dump_pretty(value, indent=0):
    """Multi-line form: top-level list gets one item per line."""
    if not isinstance(value, list):
        return _print_atom(value)
    flat = dump(value)
    if len(flat) + indent <= 72 or not any(isinstance(v, list) for v in value):
        return flat
    pad = " " * (indent + 2)
    head = []
    i = 0
    while i < len(value) and not isinstance(value[i], list):
        head.append(_print_atom(value[i]))
        i += 1
    lines = ["(" + " ".join(head)]
    for v in value[i:]:
        lines.append(pad + dump_pretty(v, indent + 2))
    return ("\n".join(lines) + ")") if len(lines) > 1 else lines[0] + ")"


def symbol(v):
    if not isinstance(v, str):
        raise SexprError("expected symbol, got %r" % (v,))
    return v
