import numpy as np

from siltkit.complexes import ProjComplex


def t_complex(A, n, m, i, r):
    """The two-term complex P(i,r+1) -> P(i-1,r+1) + P(i+1,r) given by [a, -b]^T."""
    src = (i, (r + 1) % m)
    rows, entries = [], []
    if i > 1:
        rows.append((i - 1, (r + 1) % m))
        entries.append(A.arrow(f"a_{i - 1}_{(r + 1) % m}"))
    if i < n:
        rows.append((i + 1, r))
        entries.append((-A.arrow(f"b_{i + 1}_{r}")) % A.p)
    D = np.zeros((len(rows), 1, A.dim), dtype=np.int64)
    for k, x in enumerate(entries):
        D[k, 0] = x
    return ProjComplex(A, {-1: [A.vertex(src)], 0: [A.vertex(v) for v in rows]}, {-1: D}, check=True)


def random_two_term(A, rng, max_terms=2):
    """A random minimal two-term complex with radical entries."""
    from siltkit.complexes import minimize

    v = A.num_vertices
    top = [int(x) for x in rng.integers(0, v, rng.integers(0, max_terms + 1))]
    bot = [int(x) for x in rng.integers(0, v, rng.integers(0, max_terms + 1))]
    if not top and not bot:
        bot = [int(rng.integers(0, v))]
    D = np.zeros((len(bot), len(top), A.dim), dtype=np.int64)
    for r, w in enumerate(bot):
        for c, u in enumerate(top):
            idx = A.corner(w, u)
            if idx.size:
                D[r, c, idx] = rng.integers(0, A.p, idx.size)
    return minimize(ProjComplex(A, {-1: top, 0: bot}, {-1: D}, check=True))
