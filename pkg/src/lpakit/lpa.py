"""Symbolic Leavitt and Cohn path algebras over a finite graph.

Elements are kept in normal form: linear combinations of monomials
alpha * beta^* with alpha, beta paths sharing a range vertex.  Products
contract ghost-against-real path prefixes; the Leavitt context additionally
rewrites, at the junction of every monomial, the idempotent of the special
edge (the first edge its source emits) into the other edge idempotents.
Coefficients are exact rationals by default, or a prime field when the
context carries a positive characteristic.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

from .errors import InputError, VerificationError
from .graph import Graph, _maps


# ---------------------------------------------------------------------------
# scalars


class GFElem:
    """Element of a prime field, interchangeable with Fraction in the engine."""

    __slots__ = ("p", "v")

    def __init__(self, p, v):
        self.p = p
        self.v = v % p

    def _lift(self, other):
        if isinstance(other, GFElem):
            if other.p != self.p:
                raise InputError("mixed prime fields")
            return other.v
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            if other.denominator % self.p == 0:
                raise InputError("denominator not invertible in the prime field")
            return other.numerator * pow(other.denominator, -1, self.p)
        return NotImplemented

    def __add__(self, other):
        v = self._lift(other)
        return NotImplemented if v is NotImplemented else GFElem(self.p, self.v + v)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._lift(other)
        return NotImplemented if v is NotImplemented else GFElem(self.p, self.v - v)

    def __rsub__(self, other):
        v = self._lift(other)
        return NotImplemented if v is NotImplemented else GFElem(self.p, v - self.v)

    def __mul__(self, other):
        v = self._lift(other)
        return NotImplemented if v is NotImplemented else GFElem(self.p, self.v * v)

    __rmul__ = __mul__

    def __truediv__(self, other):
        v = self._lift(other)
        if v is NotImplemented:
            return NotImplemented
        return GFElem(self.p, self.v * pow(v, -1, self.p))

    def __neg__(self):
        return GFElem(self.p, -self.v)

    def __eq__(self, other):
        if isinstance(other, GFElem):
            return self.p == other.p and self.v == other.v
        if isinstance(other, (int, Fraction)):
            lifted = self._lift(other)
            return lifted is not NotImplemented and self.v == lifted % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.p, self.v))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return f"{self.v}"


@dataclass(frozen=True)
class Context:
    """Which algebra an element lives in: graph, Leavitt or Cohn relations,
    and the scalar characteristic (0 for the rationals)."""

    graph: Graph
    kind: str
    char: int = 0

    def __post_init__(self):
        if self.kind not in ("leavitt", "cohn"):
            raise InputError(f"unknown context kind {self.kind!r}")
        if self.char < 0 or self.char == 1:
            raise InputError("characteristic must be 0 or a prime")

    def coeff(self, x):
        if self.char:
            if isinstance(x, GFElem):
                if x.p != self.char:
                    raise InputError("mixed prime fields")
                return x
            if isinstance(x, Fraction):
                return GFElem(self.char, 1) * x
            return GFElem(self.char, int(x))
        if isinstance(x, GFElem):
            raise InputError("prime field scalar in a characteristic-0 context")
        return Fraction(x)

    def one(self):
        return self.coeff(1)


class Monomial(NamedTuple):
    """alpha * beta^* with the shared range vertex recorded."""

    alpha: tuple
    beta: tuple
    range: str


def monomial_sort_key(m):
    return (len(m.alpha) + len(m.beta), len(m.alpha), m.alpha, m.beta, m.range)


# ---------------------------------------------------------------------------
# normal form machinery

_REDUCE_MEMO = {}


def _reduce_leavitt(gm, key, mono):
    """Rewrite a monomial into the special-edge normal form; returns a tuple
    of (monomial, integer coefficient) pairs."""
    memo = _REDUCE_MEMO.setdefault(key, {})
    got = memo.get(mono)
    if got is not None:
        return got
    a, b, r = mono
    if a and b and a[-1] == b[-1] and gm.special[gm.src[a[-1]]] == a[-1]:
        g_edge = a[-1]
        v = gm.src[g_edge]
        acc = {}
        for m2, c2 in _reduce_leavitt(gm, key, Monomial(a[:-1], b[:-1], v)):
            acc[m2] = acc.get(m2, 0) + c2
        for e in gm.out[v]:
            if e != g_edge:
                m2 = Monomial(a[:-1] + (e,), b[:-1] + (e,), gm.rng[e])
                acc[m2] = acc.get(m2, 0) - 1
        got = tuple((m2, c2) for m2, c2 in acc.items() if c2)
    else:
        got = ((mono, 1),)
    memo[mono] = got
    return got


def _mul_monomials(gm, m1, m2):
    """Product of two monomials before any Leavitt rewriting: one monomial or
    None (ghost/real prefix contraction)."""
    a1, b1, r1 = m1
    a2, b2, r2 = m2
    s1 = gm.src[b1[0]] if b1 else r1
    s2 = gm.src[a2[0]] if a2 else r2
    if s1 != s2:
        return None
    n1, n2 = len(b1), len(a2)
    if n1 <= n2:
        if a2[:n1] != b1:
            return None
        return Monomial(a1 + a2[n1:], b2, r2)
    if b1[:n2] != a2:
        return None
    return Monomial(a1, b2 + b1[n2:], r1)


class AlgebraElement:
    """Normal-form element of a Leavitt or Cohn path algebra."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx, terms):
        self.ctx = ctx
        self.terms = {m: c for m, c in terms.items() if c}

    # -- ring structure

    def _require_same(self, other):
        if not isinstance(other, AlgebraElement) or other.ctx != self.ctx:
            raise InputError("operands live in different algebra contexts")

    def __add__(self, other):
        self._require_same(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return AlgebraElement(self.ctx, out)

    def __sub__(self, other):
        self._require_same(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) - c
        return AlgebraElement(self.ctx, out)

    def __neg__(self):
        return AlgebraElement(self.ctx, {m: -c for m, c in self.terms.items()})

    def scale(self, x):
        x = self.ctx.coeff(x)
        return AlgebraElement(self.ctx, {m: c * x for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GFElem)):
            return self.scale(other)
        self._require_same(other)
        gm = _maps(self.ctx.graph)
        leavitt = self.ctx.kind == "leavitt"
        key = (self.ctx.graph,)
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                prod = _mul_monomials(gm, m1, m2)
                if prod is None:
                    continue
                c = c1 * c2
                if leavitt:
                    for m3, k in _reduce_leavitt(gm, key, prod):
                        out[m3] = out.get(m3, 0) + c * k
                else:
                    out[prod] = out.get(prod, 0) + c
        return AlgebraElement(self.ctx, out)

    def __rmul__(self, x):
        if isinstance(x, (int, Fraction, GFElem)):
            return self.scale(x)
        return NotImplemented

    def star(self):
        """Involution: alpha beta^* maps to beta alpha^*; scalars are fixed."""
        return AlgebraElement(
            self.ctx, {Monomial(m.beta, m.alpha, m.range): c for m, c in self.terms.items()}
        )

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.ctx == other.ctx and self.terms == other.terms

    def __hash__(self):
        return hash((self.ctx, frozenset(self.terms.items())))

    def is_zero(self):
        return not self.terms

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda mc: monomial_sort_key(mc[0]))

    def __repr__(self):
        return f"<{self.ctx.kind} element {render_element(self)}>"


def zero(ctx):
    return AlgebraElement(ctx, {})


def vertex(ctx, v):
    if v not in ctx.graph.vertices:
        raise InputError(f"unknown vertex id {v!r}")
    return AlgebraElement(ctx, {Monomial((), (), v): ctx.one()})


def edge(ctx, e):
    gm = _maps(ctx.graph)
    if e not in gm.src:
        raise InputError(f"unknown edge id {e!r}")
    return AlgebraElement(ctx, {Monomial((e,), (), gm.rng[e]): ctx.one()})


def ghost(ctx, e):
    gm = _maps(ctx.graph)
    if e not in gm.src:
        raise InputError(f"unknown edge id {e!r}")
    return AlgebraElement(ctx, {Monomial((), (e,), gm.rng[e]): ctx.one()})


def unit(ctx):
    """The multiplicative unit: the sum of all vertex idempotents."""
    return AlgebraElement(
        ctx, {Monomial((), (), v): ctx.one() for v in ctx.graph.vertices}
    )


def path_element(ctx, edges_seq, start=None):
    """The element of a composable edge sequence; a vertex when empty."""
    if not edges_seq:
        if start is None:
            raise InputError("an empty path needs its base vertex")
        return vertex(ctx, start)
    gm = _maps(ctx.graph)
    out = edge(ctx, edges_seq[0])
    for e in edges_seq[1:]:
        out = out * edge(ctx, e)
    if out.is_zero():
        raise InputError(f"edge sequence {edges_seq!r} is not composable")
    return out


def multiply(a, b):
    return a * b


def involution(a):
    return a.star()


def q_idempotent(ctx, v):
    """v minus the sum of ee^* over edges leaving v (zero in the Leavitt
    algebra, a nonzero idempotent in the Cohn algebra)."""
    gm = _maps(ctx.graph)
    if v not in ctx.graph.vertices:
        raise InputError(f"unknown vertex id {v!r}")
    if not gm.out[v]:
        raise InputError(f"vertex {v!r} is a sink, its gap idempotent is not defined")
    out = vertex(ctx, v)
    for e in gm.out[v]:
        out = out - edge(ctx, e) * ghost(ctx, e)
    return out


def quotient_to_leavitt(a):
    """Push a Cohn-context element through the canonical surjection onto the
    Leavitt algebra (re-normalizes with the special-edge rewriting)."""
    if a.ctx.kind != "cohn":
        raise InputError("quotient_to_leavitt expects a Cohn-context element")
    lctx = Context(a.ctx.graph, "leavitt", a.ctx.char)
    gm = _maps(a.ctx.graph)
    key = (a.ctx.graph,)
    out = {}
    for m, c in a.terms.items():
        for m2, k in _reduce_leavitt(gm, key, m):
            out[m2] = out.get(m2, 0) + c * k
    return AlgebraElement(lctx, out)


# ---------------------------------------------------------------------------
# diagonal subalgebras


def _diagonal_shapes(a):
    """Split normal-form terms into vertex terms and ee^* terms; None when
    some term has any other shape."""
    verts = {}
    loops = {}
    for m, c in a.terms.items():
        if not m.alpha and not m.beta:
            verts[m.range] = c
        elif len(m.alpha) == 1 and m.alpha == m.beta:
            loops[m.alpha[0]] = c
        else:
            return None
    return verts, loops


def is_in_DL(a):
    """Membership in the span of sink vertices and the ee^* idempotents
    (Leavitt context)."""
    if a.ctx.kind != "leavitt":
        raise InputError("is_in_DL expects a Leavitt-context element")
    return _diagonal_shapes(a) is not None


def is_in_DC(a):
    """Membership in the span of the gap idempotents, sink vertices and ee^*
    (Cohn context)."""
    if a.ctx.kind != "cohn":
        raise InputError("is_in_DC expects a Cohn-context element")
    return _diagonal_shapes(a) is not None


def dl_coordinates(a):
    """Coordinates of a DL element over the basis {ee^*} + sinks.

    Returns a dict keyed by ("edge", e) and ("sink", v), or None when the
    element is not in DL.
    """
    if a.ctx.kind != "leavitt":
        raise InputError("dl_coordinates expects a Leavitt-context element")
    shapes = _diagonal_shapes(a)
    if shapes is None:
        return None
    verts, loops = shapes
    gm = _maps(a.ctx.graph)
    out = {}
    for v, c in verts.items():
        if gm.out[v]:
            # a vertex in normal form is the special idempotent plus every
            # other idempotent the vertex emits
            out[("edge", gm.special[v])] = c
            for f in gm.out[v]:
                if f != gm.special[v]:
                    out[("edge", f)] = c + loops.get(f, 0)
        else:
            out[("sink", v)] = c
    for f, c in loops.items():
        if ("edge", f) not in out:
            out[("edge", f)] = c
    return {k: c for k, c in out.items() if c}


def diagonal_basis_element(ctx, key):
    kind, ident = key
    if kind == "edge":
        return edge(ctx, ident) * ghost(ctx, ident)
    if kind == "sink":
        return vertex(ctx, ident)
    raise InputError(f"unknown diagonal basis key {key!r}")


# ---------------------------------------------------------------------------
# the doubling sum and twisted endomorphisms


def boxplus(a, b, x1, x2, y1, y2):
    """x1*a*y1 + x2*b*y2 after checking the two-isometry relations
    y_i x_j = delta_ij."""
    one = unit(a.ctx)
    z = zero(a.ctx)
    pairs = {(1, 1): one, (1, 2): z, (2, 1): z, (2, 2): one}
    xs = {1: x1, 2: x2}
    ys = {1: y1, 2: y2}
    for i in (1, 2):
        for j in (1, 2):
            if ys[i] * xs[j] != pairs[(i, j)]:
                raise InputError(f"doubling relations fail: y{i}*x{j} != {'1' if i == j else '0'}")
    return x1 * a * y1 + x2 * b * y2


@dataclass(frozen=True)
class HomData:
    """A vertex-fixing endomorphism presented by its generator images."""

    ctx: Context
    edge_images: dict
    ghost_images: dict

    def edge_image(self, e):
        return self.edge_images[e]

    def ghost_image(self, e):
        return self.ghost_images[e]

    def __eq__(self, other):
        return (
            isinstance(other, HomData)
            and self.ctx == other.ctx
            and self.edge_images == other.edge_images
            and self.ghost_images == other.ghost_images
        )


def identity_endomorphism(ctx):
    ids = ctx.graph.edge_ids()
    return HomData(
        ctx,
        {e: edge(ctx, e) for e in ids},
        {e: ghost(ctx, e) for e in ids},
    )


def twisted_endomorphism(ctx, u, u_inv):
    """Fix vertices, send e to u*e and e^* to e^* * u_inv, after checking
    u and u_inv really are mutually inverse."""
    one = unit(ctx)
    if u * u_inv != one or u_inv * u != one:
        raise InputError("twist is not invertible: u*u_inv != 1")
    ids = ctx.graph.edge_ids()
    return HomData(
        ctx,
        {e: u * edge(ctx, e) for e in ids},
        {e: ghost(ctx, e) * u_inv for e in ids},
    )


def apply_hom(h, a):
    """Extend the generator images linearly and multiplicatively."""
    if a.ctx != h.ctx:
        raise InputError("element and endomorphism contexts differ")
    ctx = a.ctx
    gm = _maps(ctx.graph)
    out = zero(ctx)
    for m, c in a.terms.items():
        if m.alpha:
            img = h.edge_images[m.alpha[0]]
            for e in m.alpha[1:]:
                img = img * h.edge_images[e]
        else:
            img = vertex(ctx, m.range)
        if m.beta:
            img_b = h.ghost_images[m.beta[-1]]
            for e in reversed(m.beta[:-1]):
                img_b = img_b * h.ghost_images[e]
            img = img * img_b
        out = out + img.scale(c)
    return out


def verify_homomorphism(h):
    """Check the path-algebra relations on the generator images."""
    ctx = h.ctx
    gm = _maps(ctx.graph)
    for e in ctx.graph.edge_ids():
        fe = h.edge_images[e]
        fg = h.ghost_images[e]
        if vertex(ctx, gm.src[e]) * fe != fe or fe * vertex(ctx, gm.rng[e]) != fe:
            return False
        if vertex(ctx, gm.rng[e]) * fg != fg or fg * vertex(ctx, gm.src[e]) != fg:
            return False
        for f in ctx.graph.edge_ids():
            want = vertex(ctx, gm.rng[e]) if f == e else zero(ctx)
            if fg * h.edge_images[f] != want:
                return False
    if ctx.kind == "leavitt":
        for v in ctx.graph.vertices:
            if gm.out[v]:
                acc = zero(ctx)
                for e in gm.out[v]:
                    acc = acc + h.edge_images[e] * h.ghost_images[e]
                if acc != vertex(ctx, v):
                    return False
    return True


def is_unital_hom(h):
    acc = zero(h.ctx)
    gm = _maps(h.ctx.graph)
    for v in h.ctx.graph.vertices:
        acc = acc + apply_hom(h, vertex(h.ctx, v))
    return acc == unit(h.ctx)


def lambda_map(h, a):
    """Sum over edges of h(e) * a * h(e^*)."""
    out = zero(a.ctx)
    for e in a.ctx.graph.edge_ids():
        out = out + h.edge_images[e] * a * h.ghost_images[e]
    return out


# ---------------------------------------------------------------------------
# matrices over the algebra


class LpaMatrix:
    """Rectangular matrix over one algebra context, stored sparsely."""

    __slots__ = ("ctx", "row_labels", "col_labels", "entries")

    def __init__(self, ctx, row_labels, col_labels, entries):
        self.ctx = ctx
        self.row_labels = tuple(row_labels)
        self.col_labels = tuple(col_labels)
        rows = set(self.row_labels)
        cols = set(self.col_labels)
        clean = {}
        for (i, j), a in entries.items():
            if i not in rows or j not in cols:
                raise InputError(f"entry at {(i, j)!r} outside the index sets")
            if a.ctx != ctx:
                raise InputError("matrix entry in a different context")
            if not a.is_zero():
                clean[(i, j)] = a
        self.entries = clean

    @staticmethod
    def diagonal(ctx, labels, diag_fn):
        return LpaMatrix(ctx, labels, labels, {(l, l): diag_fn(l) for l in labels})

    @staticmethod
    def identity(ctx, labels):
        one = unit(ctx)
        return LpaMatrix(ctx, labels, labels, {(l, l): one for l in labels})

    @staticmethod
    def zeros(ctx, row_labels, col_labels):
        return LpaMatrix(ctx, row_labels, col_labels, {})

    def entry(self, i, j):
        got = self.entries.get((i, j))
        return got if got is not None else zero(self.ctx)

    def _require_same_shape(self, other):
        if self.ctx != other.ctx:
            raise InputError("matrix contexts differ")
        if self.row_labels != other.row_labels or self.col_labels != other.col_labels:
            raise InputError("matrix shapes differ")

    def __add__(self, other):
        self._require_same_shape(other)
        out = dict(self.entries)
        for k, a in other.entries.items():
            out[k] = out[k] + a if k in out else a
        return LpaMatrix(self.ctx, self.row_labels, self.col_labels, out)

    def __sub__(self, other):
        self._require_same_shape(other)
        out = dict(self.entries)
        for k, a in other.entries.items():
            out[k] = out[k] - a if k in out else -a
        return LpaMatrix(self.ctx, self.row_labels, self.col_labels, out)

    def __mul__(self, other):
        if not isinstance(other, LpaMatrix):
            return NotImplemented
        if self.ctx != other.ctx:
            raise InputError("matrix contexts differ")
        if self.col_labels != other.row_labels:
            raise InputError("matrix shapes incompatible for product")
        by_row = {}
        for (k, j), b in other.entries.items():
            by_row.setdefault(k, []).append((j, b))
        out = {}
        for (i, k), a in self.entries.items():
            for j, b in by_row.get(k, ()):
                prod = a * b
                if prod.is_zero():
                    continue
                key = (i, j)
                out[key] = out[key] + prod if key in out else prod
        return LpaMatrix(self.ctx, self.row_labels, other.col_labels, out)

    def star_transpose(self):
        return LpaMatrix(
            self.ctx,
            self.col_labels,
            self.row_labels,
            {(j, i): a.star() for (i, j), a in self.entries.items()},
        )

    def map_entries(self, fn, ctx=None):
        out = {k: fn(a) for k, a in self.entries.items()}
        return LpaMatrix(ctx or self.ctx, self.row_labels, self.col_labels, out)

    def is_zero(self):
        return not self.entries

    def is_identity(self):
        if self.row_labels != self.col_labels:
            return False
        one = unit(self.ctx)
        for lab in self.row_labels:
            if self.entry(lab, lab) != one:
                return False
        return all(i == j for (i, j) in self.entries)

    def __eq__(self, other):
        if not isinstance(other, LpaMatrix):
            return NotImplemented
        return (
            self.ctx == other.ctx
            and self.row_labels == other.row_labels
            and self.col_labels == other.col_labels
            and self.entries == other.entries
        )

    def __repr__(self):
        return f"<LpaMatrix {len(self.row_labels)}x{len(self.col_labels)}>"


def mat_mul(a, b):
    return a * b


def mat_add(a, b):
    return a + b


def star_transpose(a):
    return a.star_transpose()


def is_identity(a):
    return a.is_identity()


# ---------------------------------------------------------------------------
# rendering and parsing


def render_monomial(m):
    parts = list(m.alpha) + [f"{e}^*" for e in reversed(m.beta)]
    return "*".join(parts) if parts else m.range


def render_coeff(c):
    return str(c)


def render_element(a):
    if a.is_zero():
        return "0"
    pieces = []
    for m, c in a.sorted_terms():
        mono = render_monomial(m)
        if c == 1:
            body = mono
        elif c == -1:
            body = f"-{mono}"
        else:
            body = f"{render_coeff(c)}*{mono}"
        pieces.append(body)
    out = pieces[0]
    for body in pieces[1:]:
        if body.startswith("-"):
            out += f" - {body[1:]}"
        else:
            out += f" + {body}"
    return out


_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<num>\d+(?:\s*/\s*\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<star>\^\*)"
    r"|(?P<op>[-+*()])"
)


class ParseError(InputError):
    def __init__(self, message, pos):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup != "ws":
            tokens.append((m.lastgroup, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, tokens, ctx):
        self.tokens = tokens
        self.i = 0
        self.ctx = ctx
        gm = _maps(ctx.graph)
        self.vertex_ids = set(ctx.graph.vertices)
        self.edge_ids = set(gm.src)

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind, what):
        tok = self.take()
        if tok[0] != kind:
            raise ParseError(f"expected {what}", tok[2])
        return tok

    def parse(self):
        out = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected token {tok[1]!r}", tok[2])
        return out

    def expr(self):
        negate = False
        if self.peek()[:2] == ("op", "-"):
            self.take()
            negate = True
        out = self.term()
        if negate:
            out = -out
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            rhs = self.term()
            out = out + rhs if op == "+" else out - rhs
        return out

    def term(self):
        out = self.factor()
        while self.peek()[:2] == ("op", "*"):
            self.take()
            out = out * self.factor()
        return out

    def factor(self):
        out = self.primary()
        while self.peek()[0] == "star":
            self.take()
            out = out.star()
        return out

    def primary(self):
        kind, text, pos = self.take()
        if kind == "num":
            if "/" in text:
                num, den = (part.strip() for part in text.split("/"))
                if self.ctx.char:
                    return unit(self.ctx).scale(
                        GFElem(self.ctx.char, int(num)) / GFElem(self.ctx.char, int(den))
                    )
                return unit(self.ctx).scale(Fraction(int(num), int(den)))
            return unit(self.ctx).scale(int(text))
        if kind == "ident":
            in_v = text in self.vertex_ids
            in_e = text in self.edge_ids
            if in_v and in_e:
                raise ParseError(f"ambiguous identifier {text!r} (both vertex and edge)", pos)
            if in_v:
                return vertex(self.ctx, text)
            if in_e:
                return edge(self.ctx, text)
            raise ParseError(f"unknown identifier {text!r}", pos)
        if (kind, text) == ("op", "("):
            out = self.expr()
            self.expect_close()
            return out
        raise ParseError(f"unexpected token {text!r}" if text else "unexpected end of input", pos)

    def expect_close(self):
        tok = self.take()
        if tok[:2] != ("op", ")"):
            raise ParseError("expected ')'", tok[2])


def parse_expression(text, g, context, char=0):
    """Evaluate the expression grammar to a normal-form element.

    Grammar: expr := ['-'] term (('+'|'-') term)*; term := factor ('*'
    factor)*; factor := rational | ident | factor '^*' | '(' expr ')'.
    """
    ctx = g if isinstance(g, Context) else Context(g, context, char)
    return _Parser(_tokenize(text), ctx).parse()
