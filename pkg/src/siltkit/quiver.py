"""Quivers, bound quiver algebras KQ/I and their normal-form path bases.

Paths compose left to right: the path ``a.b`` first follows ``a`` and then
``b``.  A normal basis path from ``s`` to ``t`` lies in ``e_s A e_t`` and,
as a morphism of right projectives, ``Hom(e_i A, e_j A) = e_j A e_i`` acts by
left multiplication.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .algebra import AlgebraError, FDAlgebra, StructureConstantAlgebra
from .linalg import DEFAULT_PRIME

Path = tuple  # (start_vertex_index, (arrow_index, ...))

MAX_PATHS = 400_000


class NotAdmissible(AlgebraError):
    pass


class RelationNotInRadSquared(AlgebraError):
    pass


class MalformedRelation(AlgebraError):
    pass


@dataclass
class Quiver:
    vertices: list
    arrows: list  # (name, source_label, target_label)

    def __post_init__(self):
        self.vertices = list(self.vertices)
        self.arrows = [(str(n), s, t) for n, s, t in self.arrows]
        self.vertex_index = {v: i for i, v in enumerate(self.vertices)}
        if len(self.vertex_index) != len(self.vertices):
            raise ValueError("vertex labels must be unique")
        names = [a[0] for a in self.arrows]
        if len(set(names)) != len(names):
            raise ValueError("arrow names must be unique")
        for name, s, t in self.arrows:
            if s not in self.vertex_index or t not in self.vertex_index:
                raise ValueError(f"arrow {name} has an undeclared endpoint")
        self.arrow_index = {a[0]: k for k, a in enumerate(self.arrows)}
        self.arrow_source = [self.vertex_index[s] for _, s, _ in self.arrows]
        self.arrow_target = [self.vertex_index[t] for _, _, t in self.arrows]
        self.out_arrows = defaultdict(list)
        for k, s in enumerate(self.arrow_source):
            self.out_arrows[s].append(k)

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    def path_from_names(self, names, start=None) -> Path:
        names = list(names)
        if not names:
            if start is None:
                raise MalformedRelation("empty path needs an anchor vertex")
            return (self.vertex_index[start], ())
        try:
            idx = tuple(self.arrow_index[n] for n in names)
        except KeyError as exc:
            raise MalformedRelation(f"unknown arrow {exc.args[0]!r}") from None
        for a, b in zip(idx, idx[1:]):
            if self.arrow_target[a] != self.arrow_source[b]:
                raise MalformedRelation(f"arrows {self.arrows[a][0]} and {self.arrows[b][0]} do not compose")
        return (self.arrow_source[idx[0]], idx)

    def path_target(self, path: Path) -> int:
        s, arrows = path
        return self.arrow_target[arrows[-1]] if arrows else s

    def path_names(self, path: Path) -> tuple:
        return tuple(self.arrows[k][0] for k in path[1])

    def path_label(self, path: Path) -> str:
        if not path[1]:
            return f"e[{self.vertices[path[0]]}]"
        return ".".join(self.path_names(path))

    def sort_key(self, path: Path):
        return (len(path[1]), self.path_names(path))

    def paths_up_to(self, length: int) -> list[list[Path]]:
        """All paths grouped by length ``0..length``."""
        levels = [[(v, ()) for v in range(self.num_vertices)]]
        total = self.num_vertices
        for _ in range(length):
            nxt = []
            for s, arrows in levels[-1]:
                t = self.arrow_target[arrows[-1]] if arrows else s
                for k in self.out_arrows[t]:
                    nxt.append((s, arrows + (k,)))
            total += len(nxt)
            if total > MAX_PATHS:
                raise NotAdmissible("path space too large before reaching an admissibility bound")
            levels.append(nxt)
        return levels

    def is_acyclic(self) -> bool:
        import networkx as nx

        g = nx.MultiDiGraph()
        g.add_nodes_from(range(self.num_vertices))
        g.add_edges_from(zip(self.arrow_source, self.arrow_target))
        return nx.is_directed_acyclic_graph(g)


Relation = list  # [(coefficient, [arrow names]), ...]


def _normalize_relation(quiver: Quiver, rel, p: int) -> dict:
    terms: dict[Path, int] = {}
    ends = set()
    for coeff, names in rel:
        path = quiver.path_from_names(names)
        if len(path[1]) < 2:
            raise RelationNotInRadSquared(f"relation term {'.'.join(names) or 'e'} has length < 2")
        ends.add((path[0], quiver.path_target(path)))
        terms[path] = (terms.get(path, 0) + int(coeff)) % p
    if len(ends) > 1:
        raise MalformedRelation("relation terms are not parallel paths")
    return {k: v for k, v in terms.items() if v}


class BoundQuiverAlgebra(FDAlgebra):
    """``KQ/I`` with a deterministic normal-form path basis."""

    def __init__(self, quiver: Quiver, relations, p: int, loewy_bound: int,
                 normal_paths: list[Path], rewrite: dict):
        self.quiver = quiver
        self.relations = relations
        self.loewy_bound = loewy_bound
        self.paths = normal_paths
        self.path_index = {path: k for k, path in enumerate(normal_paths)}
        self.rewrite = rewrite
        nv = quiver.num_vertices
        d = len(normal_paths)
        source = [path[0] for path in normal_paths]
        target = [quiver.path_target(path) for path in normal_paths]
        idem = np.zeros((nv, d), dtype=np.int64)
        for v in range(nv):
            idem[v, self.path_index[(v, ())]] = 1
        super().__init__(p, quiver.vertices, [quiver.path_label(x) for x in normal_paths],
                         source, target, idem)
        self.path_length = np.array([len(x[1]) for x in normal_paths], dtype=np.int64)

    # ------------------------------------------------------------ normal forms
    def normal_form(self, path: Path) -> np.ndarray:
        if len(path[1]) >= self.loewy_bound:
            return self.zero()
        k = self.path_index.get(path)
        if k is not None:
            return self.basis_vector(k)
        return self.rewrite[path].copy()

    def _build_table(self) -> np.ndarray:
        d = self.dim
        T = np.zeros((d, d, d), dtype=np.int64)
        for a, pa in enumerate(self.paths):
            t = self.target[a]
            for b in np.flatnonzero(self.source == t):
                pb = self.paths[b]
                T[a, b] = self.normal_form((pa[0], pa[1] + pb[1]))
        return T

    def e(self, vertex) -> np.ndarray:
        return self.idempotents[self.vertex(vertex)].copy()

    def arrow(self, name: str) -> np.ndarray:
        return self.path(name)

    def path(self, *names) -> np.ndarray:
        """Normal form of the path through the given arrows (zero if it vanishes)."""
        if len(names) == 1 and not isinstance(names[0], str):
            names = tuple(names[0])
        return self.normal_form(self.quiver.path_from_names(names))

    def element(self, terms) -> np.ndarray:
        """Element from ``[(coeff, [arrow names]), ...]``; ``[]`` names need ``(coeff, [], vertex)``."""
        v = self.zero()
        for term in terms:
            coeff, names = term[0], term[1]
            start = term[2] if len(term) > 2 else None
            v = (v + int(coeff) * self.normal_form(self.quiver.path_from_names(names, start))) % self.p
        return v

    def hom_projectives(self, i, j) -> np.ndarray:
        """Basis indices of ``Hom(P(i), P(j)) = e_j A e_i``."""
        return self.corner(self.vertex(j), self.vertex(i))

    def projective_dim(self, i) -> int:
        return int(np.count_nonzero(self.source == self.vertex(i)))

    def arrow_elements(self) -> list[np.ndarray]:
        return [self.arrow(a[0]) for a in self.quiver.arrows]

    def summary(self) -> dict:
        return {
            "dim": self.dim,
            "vertices": len(self.vertex_labels),
            "arrows": len(self.quiver.arrows),
            "loewy_bound": self.loewy_bound,
            "p": self.p,
        }


def build_algebra(quiver: Quiver, relations, p: int = DEFAULT_PRIME, max_cap: int = 40) -> BoundQuiverAlgebra:
    """Construct ``KQ/<relations>`` and certify admissibility.

    The ideal is spanned, inside the space of paths of length at most ``cap``,
    by all ``u*r*v``.  The cap grows until every path of length ``cap`` lies in
    that span; the cap is then the Loewy bound ``L``.
    """
    p = linalg.check_prime(p)
    rels = [_normalize_relation(quiver, r, p) for r in relations]
    rels = [r for r in rels if r]
    for cap in range(1, max_cap + 1):
        result = _reduce_at_cap(quiver, rels, p, cap)
        if result is not None:
            normal, rewrite = result
            return BoundQuiverAlgebra(quiver, relations, p, cap, normal, rewrite)
    raise NotAdmissible(f"not admissible within cap {max_cap}")


def _reduce_at_cap(quiver: Quiver, rels: list[dict], p: int, cap: int):
    levels = quiver.paths_up_to(cap)
    groups: dict[tuple[int, int], list[Path]] = defaultdict(list)
    for level in levels:
        for path in level:
            groups[(path[0], quiver.path_target(path))].append(path)
    # columns ordered largest first so pivots (eliminated paths) are the largest
    col_index = {}
    for key, paths in groups.items():
        paths.sort(key=quiver.sort_key, reverse=True)
        for c, path in enumerate(paths):
            col_index[path] = c
    ends_to = defaultdict(list)  # paths ending at vertex
    starts_at = defaultdict(list)
    for level in levels:
        for path in level:
            ends_to[quiver.path_target(path)].append(path)
            starts_at[path[0]].append(path)
    gens: dict[tuple[int, int], list[np.ndarray]] = defaultdict(list)
    for rel in rels:
        some = next(iter(rel))
        rs, rt = some[0], quiver.path_target(some)
        minlen = min(len(x[1]) for x in rel)
        room = cap - minlen
        if room < 0:
            continue
        for u in ends_to[rs]:
            lu = len(u[1])
            if lu > room:
                continue
            for v in starts_at[rt]:
                lv = len(v[1])
                if lu + lv > room:
                    continue
                key = (u[0], quiver.path_target(v))
                vec = np.zeros(len(groups[key]), dtype=np.int64)
                for w, c in rel.items():
                    arrows = u[1] + w[1] + v[1]
                    if len(arrows) > cap:
                        continue
                    vec[col_index[(u[0], arrows)]] += c
                gens[key].append(vec % p)
    normal: list[Path] = []
    rewrite: dict[Path, np.ndarray] = {}
    pending: list[tuple[Path, list[tuple[Path, int]]]] = []
    for key, paths in groups.items():
        rows = gens.get(key)
        if rows:
            R, rk, piv = linalg.rref(np.array(rows), p)
        else:
            R, rk, piv = np.zeros((0, len(paths)), dtype=np.int64), 0, np.empty(0, dtype=np.int64)
        pivset = set(int(c) for c in piv)
        top = [c for c, path in enumerate(paths) if len(path[1]) == cap]
        if top:
            # every length-cap path must be in the span of the ideal generators
            unit = np.zeros((len(top), len(paths)), dtype=np.int64)
            unit[np.arange(len(top)), top] = 1
            if linalg.rank(np.vstack([R[:rk], unit]), p) != rk:
                return None
        for c, path in enumerate(paths):
            if c not in pivset and len(path[1]) < cap:
                normal.append(path)
        for r in range(rk):
            c = int(piv[r])
            path = paths[c]
            if len(path[1]) >= cap:
                continue
            tail = [(paths[j], int((-R[r, j]) % p)) for j in np.flatnonzero(R[r]) if j != c]
            pending.append((path, tail))
    normal.sort(key=lambda x: (len(x[1]), x[0], quiver.path_names(x)))
    index = {path: k for k, path in enumerate(normal)}
    d = len(normal)
    for path, tail in pending:
        vec = np.zeros(d, dtype=np.int64)
        for q, c in tail:
            if len(q[1]) < cap:
                vec[index[q]] = (vec[index[q]] + c) % p
        rewrite[path] = vec
    return normal, rewrite


# ---------------------------------------------------------------- structure

def radical_and_socle(A: BoundQuiverAlgebra) -> dict:
    """Per-vertex bases (rows, full coordinates) of ``rad P(i)`` and ``soc P(i)``."""
    p = A.p
    arrows = A.arrow_elements()
    rad_P, soc_P = {}, {}
    for i in range(A.num_vertices):
        idx = np.flatnonzero(A.source == i)
        rad_idx = idx[A.path_length[idx] >= 1]
        R = np.zeros((rad_idx.size, A.dim), dtype=np.int64)
        R[np.arange(rad_idx.size), rad_idx] = 1
        rad_P[i] = R
        allidx = np.arange(A.dim)
        blocks = [A.right_block(a, idx, allidx) for a in arrows]
        M = np.vstack(blocks) if blocks else np.zeros((0, idx.size), dtype=np.int64)
        K = linalg.nullspace(M, p) if M.shape[0] else np.eye(idx.size, dtype=np.int64)
        S = np.zeros((K.shape[0], A.dim), dtype=np.int64)
        S[:, idx] = K
        soc_P[i] = linalg.row_basis(S, p) if S.shape[0] else S
    rad_A = np.vstack(list(rad_P.values())) if rad_P else np.zeros((0, A.dim), dtype=np.int64)
    soc_A = np.vstack(list(soc_P.values())) if soc_P else np.zeros((0, A.dim), dtype=np.int64)
    return {"rad_P": rad_P, "soc_P": soc_P, "rad": rad_A, "soc": soc_A}


def idempotent_subalgebra(A: FDAlgebra, vertices) -> StructureConstantAlgebra:
    """``eAe`` for ``e`` the sum of the idempotents at ``vertices``."""
    E = [A.vertex(v) for v in vertices]
    if not E:
        raise ValueError("vertex subset must be nonempty")
    pos = {v: k for k, v in enumerate(E)}
    keep = np.array([k for k in range(A.dim) if A.source[k] in pos and A.target[k] in pos], dtype=np.int64)
    T = A.table[np.ix_(keep, keep, keep)]
    # products of elements of eAe stay in eAe, so restriction is exact; verify it
    full = A.table[np.ix_(keep, keep)].sum(axis=(0, 1))
    mask = np.ones(A.dim, dtype=bool)
    mask[keep] = False
    if np.any(full[mask]):
        raise AlgebraError("corner products left eAe")
    idem = A.idempotents[np.ix_(E, keep)]
    return StructureConstantAlgebra(
        A.p, T, [A.vertex_labels[v] for v in E], [A.basis_labels[k] for k in keep],
        [pos[int(A.source[k])] for k in keep], [pos[int(A.target[k])] for k in keep], idem)


def as_structure_constant(A: FDAlgebra) -> StructureConstantAlgebra:
    return StructureConstantAlgebra(A.p, A.table, A.vertex_labels, A.basis_labels,
                                    A.source, A.target, A.idempotents, verify=False)
