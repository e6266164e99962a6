"""Construction and certification of the kernel-indexed unitaries.

Given an integer vector x in the kernel of the vertex matrix, push it to an
edge-indexed vector, build the diagonal matrix V of edges and ghost edges,
complete it by a 0/1-paired diagonal-subalgebra matrix W, and certify that
U = V + W is unitary.  Lifting the same data to the Cohn algebra, the two
defect idempotents of the lift live in the ideal spanned by the gap
idempotents; reading their per-vertex ranks computes the index boundary of
U, which is checked to equal -x exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError, VerificationError
from .graph import _maps, bk_matrix, classify_vertices
from .lpa import (
    AlgebraElement,
    Context,
    GFElem,
    HomData,
    LpaMatrix,
    Monomial,
    apply_hom,
    diagonal_basis_element,
    dl_coordinates,
    edge,
    ghost,
    is_in_DL,
    monomial_sort_key,
    unit,
    verify_homomorphism,
    vertex,
    zero,
)
from .zlinalg import IntMatrix, det, kernel_basis


@dataclass(frozen=True)
class EdgeVector:
    """Integer vector over edges and sinks, the pushforward of a kernel
    vector along edge sources (sink coordinates stay zero)."""

    graph: object
    edges: tuple
    sinks: tuple

    def edge_value(self, e):
        gm = _maps(self.graph)
        return self.edges[list(gm.src).index(e)]


def regular_order(g):
    return classify_vertices(g).regular


def check_kernel_vector(g, x):
    reg = regular_order(g)
    x = tuple(int(c) for c in x)
    if len(x) != len(reg):
        raise InputError(
            f"kernel vector needs one coordinate per regular vertex ({len(reg)}), got {len(x)}"
        )
    if any(bk_matrix(g).mulvec(x)):
        raise InputError("vector is not in the kernel of the vertex matrix")
    return x


def s_star(g, x):
    """Push a kernel vector to edge coordinates: y_e = x at the source of e;
    sink coordinates are zero."""
    x = check_kernel_vector(g, x)
    reg = regular_order(g)
    idx = {v: i for i, v in enumerate(reg)}
    gm = _maps(g)
    edges = tuple(x[idx[gm.src[e]]] for e in g.edge_ids())
    cls = classify_vertices(g)
    return EdgeVector(g, edges, tuple(0 for _ in cls.sinks))


def index_set(y):
    """Ordered index set {(e, j) : y_e != 0, 1 <= j <= |y_e|}, edges in
    declaration order."""
    out = []
    for e, val in zip(y.graph.edge_ids(), y.edges):
        for j in range(1, abs(val) + 1):
            out.append((e, j))
    return tuple(out)


def _edge_values(g, y):
    return dict(zip(g.edge_ids(), y.edges))


def build_V(g, x, char=0):
    """Diagonal matrix with entry e or e^* at (e, j) according to the sign of
    the pushed-forward coordinate."""
    y = s_star(g, x)
    s = index_set(y)
    if not s:
        raise InputError("empty index set: the kernel vector is zero")
    ctx = Context(g, "leavitt", char)
    vals = _edge_values(g, y)
    return LpaMatrix.diagonal(
        ctx, s, lambda lab: edge(ctx, lab[0]) if vals[lab[0]] > 0 else ghost(ctx, lab[0])
    )


def _lambda_order(g):
    """The diagonal idempotent index set: one key per edge, one per sink."""
    cls = classify_vertices(g)
    return tuple(("edge", e) for e in g.edge_ids()) + tuple(("sink", v) for v in cls.sinks)


def _diagonal_supports(mat):
    """Per-idempotent 0/1 supports of a diagonal matrix over DL."""
    supports = {}
    for (i, j) in mat.entries:
        if i != j:
            raise VerificationError("defect matrix is not diagonal")
    for lab in mat.row_labels:
        entry = mat.entry(lab, lab)
        if entry.is_zero():
            continue
        coords = dl_coordinates(entry)
        if coords is None:
            raise VerificationError("defect entry left the diagonal subalgebra")
        for key, c in coords.items():
            if c != 1:
                raise VerificationError("defect entry has a non-0/1 diagonal coordinate")
            supports.setdefault(key, []).append(lab)
    return supports


@dataclass(eq=False)
class UnitaryBundle:
    """V, W and U = V + W over the Leavitt algebra, with the pairing data
    that built W."""

    graph: object
    x: tuple
    y: EdgeVector
    S: tuple
    V: LpaMatrix
    W: LpaMatrix
    U: LpaMatrix
    basis_choice: dict
    char: int = 0

    def is_empty(self):
        return not self.S


def build_W(g, x, char=0, check=True):
    """Pair the supports of 1 - VV^* and 1 - V^*V idempotent by idempotent in
    ascending index order and sum the pairings."""
    bundle = _build_bundle(g, x, char=char, check=check)
    return bundle.W


def build_U(g, x, char=0, check=True):
    """The unitary V + W, with unitarity and the pairing relations verified
    unless check is disabled."""
    return _build_bundle(g, x, char=char, check=check)


def _build_bundle(g, x, char=0, check=True):
    x = check_kernel_vector(g, x)
    y = s_star(g, x)
    s = index_set(y)
    ctx = Context(g, "leavitt", char)
    if not s:
        empty = LpaMatrix.zeros(ctx, (), ())
        return UnitaryBundle(g, x, y, s, empty, empty, empty, {}, char)

    v_mat = build_V(g, x, char=char)
    ident = LpaMatrix.identity(ctx, s)
    p_mat = ident - v_mat * v_mat.star_transpose()
    q_mat = ident - v_mat.star_transpose() * v_mat

    p_sup = _diagonal_supports(p_mat)
    q_sup = _diagonal_supports(q_mat)

    pos = {lab: i for i, lab in enumerate(s)}
    basis_choice = {}
    entries = {}
    for key in _lambda_order(g):
        rows = sorted(p_sup.get(key, []), key=pos.__getitem__)
        cols = sorted(q_sup.get(key, []), key=pos.__getitem__)
        if len(rows) != len(cols):
            raise VerificationError(
                f"support count mismatch at {key!r}: {len(rows)} rows vs {len(cols)} cols"
            )
        if not rows:
            continue
        basis_choice[key] = tuple(zip(rows, cols))
        idem = diagonal_basis_element(ctx, key)
        for r, c in zip(rows, cols):
            cur = entries.get((r, c))
            entries[(r, c)] = idem if cur is None else cur + idem
    w_mat = LpaMatrix(ctx, s, s, entries)
    u_mat = v_mat + w_mat

    if check:
        ws = w_mat.star_transpose()
        vs = v_mat.star_transpose()
        if w_mat * ws != p_mat or ws * w_mat != q_mat:
            raise VerificationError("pairing relations failed: WW^* or W^*W is wrong")
        if not (ws * v_mat).is_zero() or not (vs * w_mat).is_zero():
            raise VerificationError("pairing relations failed: W^*V or V^*W is nonzero")
        if any(not is_in_DL(a) for a in w_mat.entries.values()):
            raise VerificationError("W has an entry outside the diagonal subalgebra")
        us = u_mat.star_transpose()
        if not (u_mat * us).is_identity() or not (us * u_mat).is_identity():
            raise VerificationError("U is not unitary")
    return UnitaryBundle(g, x, y, s, v_mat, w_mat, u_mat, basis_choice, char)


# ---------------------------------------------------------------------------
# the Cohn lift and the boundary computation


def cohn_lift(bundle):
    """Rebuild V and W from the bundle data inside the Cohn algebra."""
    g = bundle.graph
    ctx = Context(g, "cohn", bundle.char)
    if bundle.is_empty():
        empty = LpaMatrix.zeros(ctx, (), ())
        return empty, empty, empty
    vals = _edge_values(g, bundle.y)
    v_hat = LpaMatrix.diagonal(
        ctx,
        bundle.S,
        lambda lab: edge(ctx, lab[0]) if vals[lab[0]] > 0 else ghost(ctx, lab[0]),
    )
    entries = {}
    for key, pairs in bundle.basis_choice.items():
        idem = diagonal_basis_element(ctx, key)
        for r, c in pairs:
            cur = entries.get((r, c))
            entries[(r, c)] = idem if cur is None else cur + idem
    w_hat = LpaMatrix(ctx, bundle.S, bundle.S, entries)
    return v_hat, w_hat, v_hat + w_hat


def q_ideal_coordinates(a):
    """Coordinates of a Cohn element over the gap-ideal basis of terms
    alpha q_v beta^*, found by ascending-length triangular substitution.

    Raises VerificationError when the element is not in the ideal.
    """
    gm = _maps(a.ctx.graph)
    rem = dict(a.terms)
    out = {}
    if not rem:
        return out
    maxlen = max(len(m.alpha) + len(m.beta) for m in rem)
    while rem:
        m = min(rem, key=monomial_sort_key)
        if len(m.alpha) + len(m.beta) > maxlen:
            raise VerificationError("element is not in the gap ideal")
        v = m.range
        if not gm.out[v]:
            raise VerificationError("element is not in the gap ideal (sink-ranged term)")
        c = rem.pop(m)
        out[(m.alpha, v, m.beta)] = c
        for e in gm.out[v]:
            key = Monomial(m.alpha + (e,), m.beta + (e,), gm.rng[e])
            nc = rem.get(key, 0) + c
            if nc:
                rem[key] = nc
            else:
                rem.pop(key, None)
    return out


def _field_rank(rows):
    """Rank of a dense matrix over an exact field."""
    mat = [list(r) for r in rows]
    rank = 0
    ncols = len(mat[0]) if mat else 0
    for col in range(ncols):
        pivot = None
        for r in range(rank, len(mat)):
            if mat[r][col]:
                pivot = r
                break
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        prow = mat[rank]
        pval = prow[col]
        for r in range(len(mat)):
            if r != rank and mat[r][col]:
                factor = mat[r][col] / pval
                row = mat[r]
                for cc in range(col, ncols):
                    row[cc] = row[cc] - factor * prow[cc]
        rank += 1
    return rank


def _per_vertex_ranks(mat):
    """Split a gap-ideal matrix into its per-vertex finite blocks and take
    exact ranks."""
    per_v = {}
    for (i, j), a in mat.entries.items():
        for (alpha, v, beta), c in q_ideal_coordinates(a).items():
            per_v.setdefault(v, {})[((i, alpha), (j, beta))] = c
    ranks = {}
    for v, cells in per_v.items():
        rows = sorted({rc[0] for rc in cells})
        cols = sorted({rc[1] for rc in cells})
        cpos = {c: k for k, c in enumerate(cols)}
        dense = [[0] * len(cols) for _ in rows]
        for k, r in enumerate(rows):
            for (rr, cc), val in cells.items():
                if rr == r:
                    dense[k][cpos[cc]] = val
        ranks[v] = _field_rank(dense)
    return ranks


def boundary_class(g, x, char=0, check=True):
    """Index boundary of the unitary attached to a kernel vector, computed
    inside the Cohn algebra, returned as a vector over the regular vertices.

    The result is computed from the per-vertex ranks of the two defect
    idempotents of the Cohn lift, then (unless check is disabled) certified
    to equal -x.
    """
    x = check_kernel_vector(g, x)
    reg = regular_order(g)
    bundle = build_U(g, x, char=char, check=check)
    if bundle.is_empty():
        result = tuple(0 for _ in reg)
    else:
        _, _, u_hat = cohn_lift(bundle)
        us = u_hat.star_transpose()
        uu_s = u_hat * us
        us_u = us * u_hat
        if u_hat * us_u != u_hat:
            raise VerificationError("Cohn lift is not a partial isometry")
        ident = LpaMatrix.identity(u_hat.ctx, bundle.S)
        d1 = ident - us_u
        d0 = ident - uu_s
        if d1 * d1 != d1 or d0 * d0 != d0:
            raise VerificationError("defect matrices are not idempotent")
        r1 = _per_vertex_ranks(d1)
        r0 = _per_vertex_ranks(d0)
        result = tuple(r1.get(v, 0) - r0.get(v, 0) for v in reg)
    if check and result != tuple(-c for c in x):
        raise VerificationError(
            f"boundary {result} differs from minus the kernel vector {tuple(-c for c in x)}"
        )
    return result


# ---------------------------------------------------------------------------
# formal K1 classes


@dataclass(eq=False)
class K1Class:
    graph: object
    basis: tuple
    entries: tuple  # (multiplicity, UnitaryBundle)


def _solve_exact(columns, target):
    """Solve sum_i t_i * columns[i] = target over the rationals; None when
    inconsistent."""
    nrows = len(target)
    ncols = len(columns)
    aug = [[Fraction(columns[j][i]) for j in range(ncols)] + [Fraction(target[i])] for i in range(nrows)]
    rank = 0
    where = [-1] * ncols
    for col in range(ncols):
        pivot = next((r for r in range(rank, nrows) if aug[r][col]), None)
        if pivot is None:
            continue
        aug[rank], aug[pivot] = aug[pivot], aug[rank]
        pv = aug[rank][col]
        aug[rank] = [vv / pv for vv in aug[rank]]
        for r in range(nrows):
            if r != rank and aug[r][col]:
                fac = aug[r][col]
                aug[r] = [a - fac * b for a, b in zip(aug[r], aug[rank])]
        where[col] = rank
        rank += 1
    if any(row[-1] for row in aug[rank:]):
        return None
    return [aug[where[j]][-1] if where[j] >= 0 else Fraction(0) for j in range(ncols)]


def gamma(g, basis, coeffs, char=0, check=True):
    """Formal combination of unitary bundles over a checked kernel basis."""
    basis = [check_kernel_vector(g, b) for b in basis]
    coeffs = [int(n) for n in coeffs]
    if len(coeffs) != len(basis):
        raise InputError("one integer multiplicity per basis vector is required")
    lattice = kernel_basis(bk_matrix(g))
    if len(basis) != len(lattice):
        raise InputError(
            f"kernel basis has {len(lattice)} vectors, got {len(basis)}"
        )
    if lattice:
        trans = []
        for b in basis:
            sol = _solve_exact(lattice, b)
            if sol is None or any(t.denominator != 1 for t in sol):
                raise InputError("given vectors do not lie in the kernel lattice basis span")
            trans.append([int(t) for t in sol])
        t_mat = IntMatrix.from_rows(list(zip(*trans)))
        if abs(det(t_mat)) != 1:
            raise InputError("given vectors are not a basis of the kernel lattice")
    bundles = tuple(
        (n, build_U(g, b, char=char, check=check)) for n, b in zip(coeffs, basis) if n
    )
    return K1Class(g, tuple(tuple(b) for b in basis), bundles)


# ---------------------------------------------------------------------------
# the corner-twist identity and the pairing element


def _hom_pre_checks(phi, psi):
    if phi.ctx != psi.ctx:
        raise InputError("endomorphism contexts differ")
    if phi.ctx.kind != "leavitt":
        raise InputError("the identity verifier works in the Leavitt context")
    if not verify_homomorphism(phi) or not verify_homomorphism(psi):
        raise InputError("inputs are not verified endomorphisms")
    ctx = phi.ctx
    for e in ctx.graph.edge_ids():
        if phi.edge_images[e] * phi.ghost_images[e] != psi.edge_images[e] * psi.ghost_images[e]:
            raise InputError("endomorphisms disagree on the diagonal subalgebra")
    return ctx


def _corner_unit(phi, psi):
    """u = sum over edges of psi(e) phi(e^*), checked to commute with every
    phi(ee^*) and to be invertible with inverse sum phi(e) psi(e^*)."""
    ctx = phi.ctx
    u = zero(ctx)
    u_inv = zero(ctx)
    for e in ctx.graph.edge_ids():
        u = u + psi.edge_images[e] * phi.ghost_images[e]
        u_inv = u_inv + phi.edge_images[e] * psi.ghost_images[e]
    for e in ctx.graph.edge_ids():
        idem = phi.edge_images[e] * phi.ghost_images[e]
        if u * idem != idem * u:
            raise InputError("twist element does not commute with the corner idempotents")
    one = unit(ctx)
    if u * u_inv != one or u_inv * u != one:
        raise InputError("twist element is not invertible in the corner algebra")
    return u, u_inv


def verify_aux_identity(g, phi, psi, x, char=0):
    """Check that applying psi to the kernel unitary equals the P/Q-framed
    image under phi, with the frames built from the corner twist."""
    ctx = _hom_pre_checks(phi, psi)
    _corner_unit(phi, psi)
    x = check_kernel_vector(g, x)
    bundle = build_U(g, x, char=char)
    if bundle.is_empty():
        return True
    vals = _edge_values(g, bundle.y)
    one = unit(ctx)

    def p_entry(lab):
        e = lab[0]
        if vals[e] > 0:
            return (
                psi.edge_images[e] * phi.ghost_images[e]
                + one
                - phi.edge_images[e] * phi.ghost_images[e]
            )
        return one

    def q_entry(lab):
        e = lab[0]
        if vals[e] < 0:
            return (
                phi.edge_images[e] * psi.ghost_images[e]
                + one
                - phi.edge_images[e] * phi.ghost_images[e]
            )
        return one

    p_mat = LpaMatrix.diagonal(ctx, bundle.S, p_entry)
    q_mat = LpaMatrix.diagonal(ctx, bundle.S, q_entry)
    lhs = bundle.U.map_entries(lambda a: apply_hom(psi, a))
    rhs = p_mat * bundle.U.map_entries(lambda a: apply_hom(phi, a)) * q_mat
    return lhs == rhs


def pairing_element(g, phi, psi, e):
    """psi(e) phi(e^*) + 1 - phi(ee^*), certified invertible with inverse
    phi(e) psi(e^*) + 1 - phi(ee^*)."""
    ctx = _hom_pre_checks(phi, psi)
    gm = _maps(g)
    if e not in gm.src:
        raise InputError(f"unknown edge id {e!r}")
    one = unit(ctx)
    idem = phi.edge_images[e] * phi.ghost_images[e]
    elem = psi.edge_images[e] * phi.ghost_images[e] + one - idem
    inv = phi.edge_images[e] * psi.ghost_images[e] + one - idem
    if elem * inv != one or inv * elem != one:
        raise VerificationError("pairing element failed its invertibility check")
    return elem
