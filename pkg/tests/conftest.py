import random

import pytest

from lpakit import Context, Graph, path_element, rose, zero


def make_line3():
    return Graph(("v1", "v2", "v3"), (("e1", "v1", "v2"), ("e2", "v2", "v3")))


def make_K2():
    return Graph(
        ("v", "w"),
        (
            ("a1", "v", "v"),
            ("a2", "v", "v"),
            ("b", "v", "w"),
            ("c", "w", "v"),
            ("d1", "w", "w"),
            ("d2", "w", "w"),
        ),
    )


def make_E34():
    return Graph(
        ("u", "v"),
        (
            ("f", "u", "v"),
            ("e1", "v", "v"),
            ("e2", "v", "v"),
            ("e3", "v", "v"),
            ("e4", "v", "v"),
        ),
    )


def make_cycle(n):
    verts = tuple(f"v{i+1}" for i in range(n))
    edges = tuple((f"e{i+1}", verts[i], verts[(i + 1) % n]) for i in range(n))
    return Graph(verts, edges)


def make_torus3():
    """Three vertices, two loops each, one edge between every ordered pair;
    the kernel of its vertex matrix has rank two."""
    verts = ("v1", "v2", "v3")
    loops = tuple((f"l{i}{j}", f"v{i}", f"v{i}") for i in (1, 2, 3) for j in (1, 2))
    cross = tuple(
        (f"t{i}{j}", f"v{i}", f"v{j}") for i in (1, 2, 3) for j in (1, 2, 3) if i != j
    )
    return Graph(verts, loops + cross)


def make_sinky():
    """Two regular vertices feeding a sink, kernel spanned by (1, -1)."""
    return Graph(
        ("u", "v", "w"),
        (
            ("a1", "u", "u"),
            ("a2", "u", "u"),
            ("b", "u", "v"),
            ("s1", "u", "w"),
            ("c", "v", "u"),
            ("d1", "v", "v"),
            ("d2", "v", "v"),
            ("s2", "v", "w"),
        ),
    )


def make_zmod22():
    """Purely infinite simple with K0 = Z/2 + Z/2 (two invariant factors)."""
    return Graph(
        ("v", "w"),
        (
            ("a", "v", "v"),
            ("b1", "v", "w"),
            ("b2", "v", "w"),
            ("c1", "w", "v"),
            ("c2", "w", "v"),
            ("d", "w", "w"),
        ),
    )


def corpus():
    """Every named graph the suites run over."""
    return {
        "loop1": rose(1),
        "R2": rose(2),
        "R3": rose(3),
        "R4": rose(4),
        "R5": rose(5),
        "line3": make_line3(),
        "E34": make_E34(),
        "K2": make_K2(),
        "cycle2": make_cycle(2),
        "cycle3": make_cycle(3),
        "torus3": make_torus3(),
        "sinky": make_sinky(),
        "zmod22": make_zmod22(),
    }


def kernel_corpus():
    """The graphs whose vertex matrix has a nontrivial kernel."""
    full = corpus()
    return {k: full[k] for k in ("loop1", "cycle2", "cycle3", "K2", "torus3", "sinky")}


@pytest.fixture
def graphs():
    return corpus()


def in_edges(g):
    into = {v: [] for v in g.vertices}
    for e, _, r in g.edges:
        into[r].append(e)
    return into


def random_element(ctx, rng, max_len=3, max_terms=5):
    """Random normal-form element with bounded path length and term count."""
    src = {e: s for e, s, _ in ctx.graph.edges}
    into = in_edges(ctx.graph)

    def back_path(v):
        path = []
        cur = v
        for _ in range(rng.randint(0, max_len)):
            if not into[cur]:
                break
            e = rng.choice(into[cur])
            path.append(e)
            cur = src[e]
        path.reverse()
        return tuple(path)

    out = zero(ctx)
    for _ in range(rng.randint(1, max_terms)):
        v = rng.choice(ctx.graph.vertices)
        alpha, beta = back_path(v), back_path(v)
        coeff = rng.choice([-2, -1, 1, 2, 3])
        mono = path_element(ctx, alpha, v) * path_element(ctx, beta, v).star()
        out = out + mono.scale(coeff)
    return out


def seeded(name):
    return random.Random(f"lpakit:{name}")


def brute_pointed_orbit(torsion, point):
    """Orbit of a point under all automorphisms of + Z/d_i, by enumerating
    every generator-image tuple and keeping the bijective ones.

    Deliberately independent of the library's decision procedure: no order
    pruning, bijectivity established by counting images, no Smith forms.
    """
    from itertools import product

    elements = list(product(*(range(d) for d in torsion)))
    k = len(torsion)
    point = tuple(c % d for c, d in zip(point, torsion))
    orbit = set()
    for images in product(elements, repeat=k):
        ok = True
        for j in range(k):
            for i in range(k):
                if (torsion[j] * images[j][i]) % torsion[i]:
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue
        seen = set()
        for elt in elements:
            seen.add(
                tuple(
                    sum(images[j][i] * elt[j] for j in range(k)) % torsion[i]
                    for i in range(k)
                )
            )
        if len(seen) == len(elements):
            orbit.add(
                tuple(
                    sum(images[j][i] * point[j] for j in range(k)) % torsion[i]
                    for i in range(k)
                )
            )
    return orbit
