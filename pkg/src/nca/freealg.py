"""Words and polynomials in a free algebra on graded generators.

A word is a tuple of generator indices; the empty tuple is the unit.  An
:class:`NcPoly` maps words to nonzero residues mod p.  Multiplication is
concatenation, never commutation.
"""

import re
from dataclasses import dataclass, field
from functools import cached_property

from nca.errors import ParseError
from nca.linalg import DEFAULT_PRIME, FieldSpec

_IDENT = re.compile(r"[a-zA-Z][a-zA-Z0-9_]*")

LT, EQ, GT = -1, 0, 1


class NcPoly:
    """Element of the free algebra k<x_1..x_n>, coefficients in GF(p)."""

    __slots__ = ("terms", "p")

    def __init__(self, terms=None, p=DEFAULT_PRIME):
        self.p = p
        out = {}
        for w, c in (terms or {}).items():
            c %= p
            if c:
                out[tuple(w)] = c
        self.terms = out

    @classmethod
    def word(cls, w, p=DEFAULT_PRIME, coeff=1):
        return cls({tuple(w): coeff}, p)

    @classmethod
    def zero(cls, p=DEFAULT_PRIME):
        return cls({}, p)

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self.terms
        if not isinstance(other, NcPoly):
            return NotImplemented
        return self.p == other.p and self.terms == other.terms

    def __hash__(self):
        return hash((self.p, frozenset(self.terms.items())))

    def __repr__(self):
        return f"NcPoly({dict(sorted(self.terms.items()))!r}, p={self.p})"

    def __add__(self, other):
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return NcPoly(out, self.p)

    def __neg__(self):
        return NcPoly({w: -c for w, c in self.terms.items()}, self.p)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return NcPoly({w: c * v for w, v in self.terms.items()}, self.p)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        out = {}
        for u, a in self.terms.items():
            for v, b in other.terms.items():
                w = u + v
                out[w] = (out.get(w, 0) + a * b) % self.p
        return NcPoly(out, self.p)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return NotImplemented

    def reversed(self):
        return NcPoly({w[::-1]: c for w, c in self.terms.items()}, self.p)

    def degrees(self, gen_degrees):
        return {word_degree(w, gen_degrees) for w in self.terms}

    def degree(self, gen_degrees):
        """Common degree of a homogeneous polynomial, None for zero."""
        degs = self.degrees(gen_degrees)
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError(f"polynomial is not homogeneous (degrees {sorted(degs)})")
        return degs.pop()

    def is_homogeneous(self, gen_degrees):
        return len(self.degrees(gen_degrees)) <= 1

    def format(self, names, order=None):
        return format_poly(self, names, order)


def word_degree(w, gen_degrees):
    return sum(gen_degrees[g] for g in w)


@dataclass(frozen=True)
class MonomialOrder:
    """Degree-lexicographic order.

    ``precedence`` lists generator indices from smallest to largest.
    """

    precedence: tuple
    degrees: tuple

    def __post_init__(self):
        if sorted(self.precedence) != list(range(len(self.degrees))):
            raise ValueError("precedence must be a permutation of the generators")

    @cached_property
    def rank(self):
        r = [0] * len(self.precedence)
        for i, g in enumerate(self.precedence):
            r[g] = i
        return tuple(r)

    def key(self, w):
        # words of equal degree never stand in a proper-prefix relation, so
        # plain tuple comparison gives the lexicographic tie-break
        rank = self.rank
        return (word_degree(w, self.degrees), tuple(rank[g] for g in w))

    def compare(self, u, v):
        ku, kv = self.key(u), self.key(v)
        return LT if ku < kv else (GT if ku > kv else EQ)

    def leading(self, f):
        return max(f.terms, key=self.key)


def compare(order, u, v):
    return order.compare(tuple(u), tuple(v))


@dataclass(frozen=True)
class AlgebraPresentation:
    """Connected graded algebra k<generators>/(relations) over GF(p)."""

    names: tuple
    degrees: tuple
    relations: tuple
    order: MonomialOrder
    p: int = DEFAULT_PRIME
    assertions: tuple = field(default=(), compare=False)

    def __post_init__(self):
        FieldSpec(self.p)
        if len(set(self.names)) != len(self.names):
            raise ValueError("generator names must be distinct")
        if len(self.names) != len(self.degrees):
            raise ValueError("one degree per generator")
        for n in self.names:
            if not _IDENT.fullmatch(n):
                raise ValueError(f"bad generator name {n!r}")
        if any((not isinstance(d, int)) or d < 1 for d in self.degrees):
            raise ValueError("generator degrees must be positive integers")
        for r in self.relations:
            if r.p != self.p:
                raise ValueError("relation over a different field")
            deg = r.degree(self.degrees)
            if deg is not None and deg < 2:
                raise ValueError(
                    "relations of degree < 2 are not allowed; present the algebra "
                    "on a minimal generating set"
                )

    @property
    def ngens(self):
        return len(self.names)

    def index(self, name):
        return self.names.index(name)

    def word_degree(self, w):
        return word_degree(w, self.degrees)

    def describe(self):
        rels = ", ".join(format_poly(r, self.names, self.order) for r in self.relations)
        return f"k<{', '.join(self.names)}>/({rels}) over GF({self.p})"


def make_algebra(names, relations=(), degrees=None, order=None, p=DEFAULT_PRIME, assertions=()):
    """Build an :class:`AlgebraPresentation` from generator names and relation strings.

    ``order`` lists generator names from smallest to largest (default: as given).
    """
    names = tuple(names)
    degrees = tuple(degrees) if degrees is not None else (1,) * len(names)
    if order is None:
        precedence = tuple(range(len(names)))
    else:
        if sorted(order) != sorted(names):
            raise ValueError("order must list every generator exactly once")
        precedence = tuple(names.index(n) for n in order)
    mo = MonomialOrder(precedence, degrees)
    rels = []
    for r in relations:
        f = r if isinstance(r, NcPoly) else parse(r, names, p)
        if f:
            rels.append(f)
    return AlgebraPresentation(names, degrees, tuple(rels), mo, p, tuple(assertions))


def multiply(a, b):
    return a * b


def opposite(A):
    """The opposite algebra: every relation word reversed, order unchanged."""
    return AlgebraPresentation(
        A.names,
        A.degrees,
        tuple(r.reversed() for r in A.relations),
        A.order,
        A.p,
        A.assertions,
    )


# -- relation grammar --------------------------------------------------------
#   expression := term (('+'|'-') term)*
#   term       := [coefficient '*'] factor ('*' factor)*
#   factor     := identifier ['^' positive-integer]
# A lone integer is also accepted as a scalar term (needed for "0" components
# of module relations); a leading sign is accepted on the first term.

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<id>[a-zA-Z][a-zA-Z0-9_]*)|(?P<op>[-+*^]))")


def _tokenize(text):
    pos = 0
    toks = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            col = pos + len(text[pos:]) - len(text[pos:].lstrip()) + 1
            raise ParseError(f"unexpected character {text[col - 1]!r}", column=col)
        kind = m.lastgroup
        start = m.start(kind)
        toks.append((kind, m.group(kind), start + 1))
        pos = m.end()
    toks.append(("end", "", len(text) + 1))
    return toks


class _Parser:
    def __init__(self, text, names, p):
        self.toks = _tokenize(text)
        self.i = 0
        self.names = names
        self.p = p

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, column=tok[2])

    def expression(self):
        total = {}
        sign = 1
        kind, val, _ = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        while True:
            coeff, word = self.term()
            total[word] = total.get(word, 0) + sign * coeff
            kind, val, _ = self.peek()
            if kind == "end":
                break
            if kind == "op" and val in "+-":
                self.take()
                sign = -1 if val == "-" else 1
                continue
            self.fail(f"expected '+', '-' or end of input, found {val!r}")
        return NcPoly(total, self.p)

    def term(self):
        kind, val, _ = self.peek()
        coeff = 1
        word = ()
        if kind == "num":
            self.take()
            coeff = int(val)
            kind, val, _ = self.peek()
            if not (kind == "op" and val == "*"):
                return coeff, ()
            self.take()
        word += self.factor()
        while self.peek()[0] == "op" and self.peek()[1] == "*":
            self.take()
            word += self.factor()
        return coeff, word

    def factor(self):
        tok = self.take()
        kind, val, _ = tok
        if kind == "end":
            self.fail("expected a generator name, found end of input", tok)
        if kind != "id":
            self.fail(f"expected a generator name, found {val!r}", tok)
        if val not in self.names:
            self.fail(f"unknown generator {val!r}", tok)
        g = self.names.index(val)
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            ktok = self.take()
            if ktok[0] != "num" or int(ktok[1]) < 1:
                self.fail("exponent must be a positive integer", ktok)
            return (g,) * int(ktok[1])
        return (g,)


def parse(text, names, p=DEFAULT_PRIME, gen_degrees=None):
    """Parse a relation string into an :class:`NcPoly`.

    When ``gen_degrees`` is given the result must be homogeneous.
    """
    if isinstance(names, AlgebraPresentation):
        p = names.p
        names = names.names
    f = _Parser(text, tuple(names), p).expression()
    if gen_degrees is not None and not f.is_homogeneous(gen_degrees):
        raise ParseError(f"relation {text!r} is not homogeneous")
    return f


def _format_word(w, names):
    if not w:
        return "1"
    parts = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        n = j - i
        parts.append(names[w[i]] if n == 1 else f"{names[w[i]]}^{n}")
        i = j
    return "*".join(parts)


def format_poly(f, names, order=None):
    """Canonical text: terms in decreasing order, signed small coefficients."""
    if not f:
        return "0"
    if order is None:
        keyf = lambda w: (len(w), w)  # noqa: E731
    else:
        keyf = order.key
    out = []
    for w in sorted(f.terms, key=keyf, reverse=True):
        c = f.terms[w]
        neg = c > f.p // 2
        mag = f.p - c if neg else c
        if not w:
            body = str(mag)
        elif mag == 1:
            body = _format_word(w, names)
        else:
            body = f"{mag}*{_format_word(w, names)}"
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append(("- " if neg else "+ ") + body)
    return " ".join(out)
