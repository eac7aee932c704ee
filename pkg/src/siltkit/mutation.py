"""Minimal approximations, silting mutation and two-term exchange graphs."""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from . import linalg
from .complexes import (
    DEFAULT_MAX_WINDOW, ChainMap, HomSpace, ProjComplex, WindowOverflow, _empty, apply_nu, cocone,
    compose, cone, direct_sum, end_radical, hom_dim, is_isomorphic, negative_homs_vanish, shift,
)

log = logging.getLogger(__name__)

DEFAULT_CUTOFF = 2000


class ExchangeFailed(RuntimeError):
    pass


class PartialResult(ValueError):
    pass


class HomCache:
    """Memoized Hom spaces and composition images, keyed by object identity.

    Complexes are immutable, and the cache keeps references so identities are
    never recycled while an entry is alive.
    """

    def __init__(self):
        self._homs: dict = {}
        self._rad: dict = {}
        self._left: dict = {}
        self._right: dict = {}
        self._keep: dict = {}

    def hom(self, X: ProjComplex, Y: ProjComplex) -> HomSpace:
        key = (id(X), id(Y))
        H = self._homs.get(key)
        if H is None:
            H = HomSpace(X, Y)
            self._homs[key] = H
            self._keep[id(X)] = X
            self._keep[id(Y)] = Y
        return H

    def radical_maps(self, N: ProjComplex) -> list[ChainMap]:
        key = id(N)
        out = self._rad.get(key)
        if out is None:
            H = self.hom(N, N)
            R = end_radical(H)
            out = [H.to_map(linalg.matmul(r[None, :], H.reps, N.algebra.p)[0]) for r in R]
            self._rad[key] = out
        return out

    def left_image(self, X: ProjComplex, Nk: ProjComplex, Nj: ProjComplex) -> np.ndarray:
        """``rad(N_k, N_j) o Hom(X, N_k)`` in ``Hom(X, N_j)`` coordinates (rows)."""
        key = (id(X), id(Nk), id(Nj))
        out = self._left.get(key)
        if out is None:
            Hk, Hj = self.hom(X, Nk), self.hom(X, Nj)
            rows = []
            if Hk.dim and Hj.dim:
                rad = self.radical_maps(Nj) if Nk is Nj else self.hom(Nk, Nj).basis_maps()
                phis = Hk.basis_maps()
                for rho in rad:
                    for phi in phis:
                        rows.append(Hj.reduce(compose(rho, phi))[0])
            out = np.array(rows, dtype=np.int64).reshape(-1, Hj.dim)
            self._left[key] = out
        return out

    def right_image(self, X: ProjComplex, Nk: ProjComplex, Nj: ProjComplex) -> np.ndarray:
        """``Hom(N_k, X) o rad(N_j, N_k)`` in ``Hom(N_j, X)`` coordinates (rows)."""
        key = (id(X), id(Nk), id(Nj))
        out = self._right.get(key)
        if out is None:
            Hk, Hj = self.hom(Nk, X), self.hom(Nj, X)
            rows = []
            if Hk.dim and Hj.dim:
                rad = self.radical_maps(Nj) if Nk is Nj else self.hom(Nj, Nk).basis_maps()
                phis = Hk.basis_maps()
                for rho in rad:
                    for phi in phis:
                        rows.append(Hj.reduce(compose(phi, rho))[0])
            out = np.array(rows, dtype=np.int64).reshape(-1, Hj.dim)
            self._right[key] = out
        return out


_DEFAULT_CACHE = None


def _cache(cache):
    global _DEFAULT_CACHE
    if cache is not None:
        return cache
    if _DEFAULT_CACHE is None:
        _DEFAULT_CACHE = HomCache()
    return _DEFAULT_CACHE


def _top_representatives(H: HomSpace, sub: np.ndarray) -> np.ndarray:
    """Coordinate rows spanning a complement of ``sub`` in ``H``."""
    p = H.algebra.p
    eye = np.eye(H.dim, dtype=np.int64)
    if sub.shape[0] == 0 or not sub.any():
        return eye
    W = linalg.row_basis(sub, p)
    if W.shape[0] == H.dim:
        return np.zeros((0, H.dim), dtype=np.int64)
    return linalg.quotient_basis(eye, W, p)


@dataclass
class Approximation:
    map: ChainMap
    multiplicities: list[int]  # copies of each N_j in the target


def minimal_left_approximation(X: ProjComplex, N: list[ProjComplex], cache: HomCache | None = None) -> Approximation:
    """Minimal left ``add N`` approximation ``X -> N'`` (``N`` indecomposable, pairwise non-isomorphic)."""
    cache = _cache(cache)
    A = X.algebra
    p = A.p
    chosen: list[tuple[int, ChainMap]] = []
    mult = []
    for j, Nj in enumerate(N):
        Hj = cache.hom(X, Nj)
        if Hj.dim == 0:
            mult.append(0)
            continue
        subs = [cache.left_image(X, Nk, Nj) for Nk in N]
        sub = np.vstack(subs) if subs else np.zeros((0, Hj.dim), dtype=np.int64)
        reps = _top_representatives(Hj, sub)
        mult.append(reps.shape[0])
        for r in reps:
            chosen.append((j, Hj.to_map(linalg.matmul(r[None, :], Hj.reps, p)[0])))
    target = direct_sum(*[N[j] for j, _ in chosen]) if chosen else ProjComplex.zero(A)
    comps = {}
    for k in X.terms:
        if k not in target.terms:
            continue
        blocks = [f.component(k) for _, f in chosen]
        comps[k] = np.concatenate(blocks, axis=0) % p
    return Approximation(ChainMap(X, target, comps), mult)


def minimal_right_approximation(X: ProjComplex, N: list[ProjComplex], cache: HomCache | None = None) -> Approximation:
    """Minimal right ``add N`` approximation ``N'' -> X``."""
    cache = _cache(cache)
    A = X.algebra
    p = A.p
    chosen: list[tuple[int, ChainMap]] = []
    mult = []
    for j, Nj in enumerate(N):
        Hj = cache.hom(Nj, X)
        if Hj.dim == 0:
            mult.append(0)
            continue
        subs = [cache.right_image(X, Nk, Nj) for Nk in N]
        sub = np.vstack(subs) if subs else np.zeros((0, Hj.dim), dtype=np.int64)
        reps = _top_representatives(Hj, sub)
        mult.append(reps.shape[0])
        for r in reps:
            chosen.append((j, Hj.to_map(linalg.matmul(r[None, :], Hj.reps, p)[0])))
    source = direct_sum(*[N[j] for j, _ in chosen]) if chosen else ProjComplex.zero(A)
    comps = {}
    for k in X.terms:
        if k not in source.terms:
            continue
        blocks = [f.component(k) for _, f in chosen]
        comps[k] = np.concatenate(blocks, axis=1) % p
    return Approximation(ChainMap(source, X, comps), mult)


# ---------------------------------------------------------------- silting objects

def gkey(X: ProjComplex) -> tuple:
    return tuple(int(x) for x in X.g_vector())


@dataclass
class SiltingObject:
    summands: list[ProjComplex]
    provenance: list = field(default_factory=list)
    certified: bool = True

    @classmethod
    def stalk(cls, A) -> "SiltingObject":
        return cls([ProjComplex.stalk(A, i) for i in range(A.num_vertices)], [("stalk",)])

    @property
    def algebra(self):
        return self.summands[0].algebra

    def g_matrix(self) -> np.ndarray:
        return np.array([X.g_vector() for X in self.summands], dtype=np.int64)

    def key(self) -> tuple:
        return tuple(sorted(gkey(X) for X in self.summands))

    def is_two_term(self) -> bool:
        return all(set(X.terms) <= {-1, 0} for X in self.summands)

    def shifted(self, k: int = 1) -> "SiltingObject":
        return SiltingObject([shift(X, k) for X in self.summands], self.provenance + [("shift", k)])

    def __len__(self) -> int:
        return len(self.summands)

    def to_json(self) -> dict:
        return {
            "g_vectors": self.g_matrix().tolist(),
            "summands": [X.to_json() for X in self.summands],
            "provenance": [list(step) for step in self.provenance],
        }


def _check_window(Z: ProjComplex, max_window: int) -> None:
    if Z.width > max_window:
        raise WindowOverflow(f"window overflow: mutated summand spans {Z.width + 1} degrees (cap {max_window + 1})")


def left_mutation(T: SiltingObject, S, cache: HomCache | None = None,
                  max_window: int = DEFAULT_MAX_WINDOW) -> SiltingObject:
    """Replace each summand in ``S`` by the cone of its minimal left approximation."""
    cache = _cache(cache)
    S = sorted(set(int(s) for s in S))
    if not S:
        raise ValueError("mutation needs a nonempty summand set")
    N = [X for k, X in enumerate(T.summands) if k not in S]
    out = list(T.summands)
    for s in S:
        f = minimal_left_approximation(T.summands[s], N, cache).map
        Z = cone(f)
        _check_window(Z, max_window)
        out[s] = Z
    return SiltingObject(out, T.provenance + [("left", tuple(S))], T.certified)


def right_mutation(T: SiltingObject, S, cache: HomCache | None = None,
                   max_window: int = DEFAULT_MAX_WINDOW) -> SiltingObject:
    """Replace each summand in ``S`` by the co-cone of its minimal right approximation."""
    cache = _cache(cache)
    S = sorted(set(int(s) for s in S))
    if not S:
        raise ValueError("mutation needs a nonempty summand set")
    N = [X for k, X in enumerate(T.summands) if k not in S]
    out = list(T.summands)
    for s in S:
        g = minimal_right_approximation(T.summands[s], N, cache).map
        Z = cocone(g)
        _check_window(Z, max_window)
        out[s] = Z
    return SiltingObject(out, T.provenance + [("right", tuple(S))], T.certified)


def _in_two_term(X: ProjComplex) -> bool:
    return set(X.terms) <= {-1, 0}


def _exchange(T: SiltingObject, S, cache, intern: dict | None = None) -> tuple[SiltingObject | None, str]:
    for kind, fn in (("left", left_mutation), ("right", right_mutation)):
        try:
            U = fn(T, S, cache)
        except WindowOverflow:
            continue
        if all(_in_two_term(U.summands[s]) for s in S):
            if intern is not None:
                U.summands = [intern.setdefault(gkey(X), X) for X in U.summands]
            return U, kind
    return None, "blocked"


def two_term_exchange(T: SiltingObject, k: int, cache: HomCache | None = None) -> SiltingObject:
    """The two-term silting object differing from ``T`` exactly at summand ``k``."""
    U, _ = _exchange(T, [k], _cache(cache))
    if U is None:
        raise ExchangeFailed(f"no two-term exchange at summand {k}")
    return U


def nu_permutation_of_summands(T: SiltingObject, nd) -> list[int] | None:
    """Summand permutation induced by the Nakayama functor, matched by g-vectors.

    Returns ``None`` when the g-vectors are not permuted (so ``T`` is not nu-stable).
    """
    pi = nd.perm
    keys = {gkey(X): k for k, X in enumerate(T.summands)}
    out = []
    for X in T.summands:
        g = X.g_vector()
        h = np.zeros_like(g)
        h[pi] = g
        k = keys.get(tuple(int(x) for x in h))
        if k is None:
            return None
        out.append(k)
    return out


def summand_orbits(perm: list[int]) -> list[list[int]]:
    seen, orbits = set(), []
    for s in range(len(perm)):
        if s in seen:
            continue
        orb, x = [], s
        while x not in seen:
            seen.add(x)
            orb.append(x)
            x = perm[x]
        orbits.append(sorted(orb))
    return orbits


def is_nu_stable(T: SiltingObject, nd, seed: int = 0) -> bool:
    """``nu T = T``, checked summand by summand with the isomorphism test."""
    perm = nu_permutation_of_summands(T, nd)
    if perm is None:
        return False
    for k, X in enumerate(T.summands):
        if not is_isomorphic(apply_nu(X, nd), T.summands[perm[k]], seed=seed):
            return False
    return True


def nu_stable_orbit_mutation(T: SiltingObject, orbit, nd, cache: HomCache | None = None,
                             direction: str = "left", verify: bool = True) -> SiltingObject:
    fn = left_mutation if direction == "left" else right_mutation
    U = fn(T, orbit, cache)
    if verify and not is_nu_stable(U, nd):
        raise ExchangeFailed("orbit mutation lost nu-stability")
    return U


def order_ge(M: SiltingObject | list, N: SiltingObject | list) -> bool:
    """``M >= N``: ``Hom(M, N[i]) = 0`` for every ``i > 0``."""
    Ms = M.summands if isinstance(M, SiltingObject) else list(M)
    Ns = N.summands if isinstance(N, SiltingObject) else list(N)
    lo = min(min(X.terms) for X in Ms)
    hi2 = max(max(Y.terms) for Y in Ns)
    for i in range(1, max(0, hi2 - lo) + 2):
        for X in Ms:
            for Y in Ns:
                if hom_dim(X, Y, i):
                    return False
    return True


# ---------------------------------------------------------------- enumeration

@dataclass
class MutationGraphResult:
    nodes: list[SiltingObject]
    edges: list[tuple[int, tuple, int]]
    complete: bool
    cutoff: int
    index: dict = field(default_factory=dict)
    blocked: list[tuple[int, tuple]] = field(default_factory=list)
    nu_stable: bool = False

    def __len__(self) -> int:
        return len(self.nodes)

    def keys(self) -> list[tuple]:
        return [T.key() for T in self.nodes]

    def to_json(self) -> dict:
        return {
            "nodes": len(self.nodes),
            "complete": self.complete,
            "cutoff": self.cutoff,
            "nu_stable": self.nu_stable,
            "g_matrices": [sorted(list(r) for r in T.key()) for T in self.nodes],
            "edges": [[a, list(lab), b] for a, lab, b in self.edges],
            "blocked": [[a, list(lab)] for a, lab in self.blocked],
            "completeness_note": "complete means the BFS frontier was exhausted below the cutoff",
        }


def _bfs(start: SiltingObject, moves, cutoff: int, cache: HomCache, nu_stable: bool) -> MutationGraphResult:
    intern: dict = {}
    start.summands = [intern.setdefault(gkey(X), X) for X in start.summands]
    nodes = [start]
    index = {start.key(): 0}
    edges, blocked = [], []
    queue = deque([0])
    seen_edges = set()
    complete = True
    while queue:
        u = queue.popleft()
        T = nodes[u]
        for label, S in moves(T):
            U, kind = _exchange(T, S, cache, intern)
            if U is None:
                blocked.append((u, tuple(S)))
                continue
            key = U.key()
            v = index.get(key)
            if v is None:
                if len(nodes) >= cutoff:
                    complete = False
                    queue.clear()
                    break
                v = len(nodes)
                index[key] = v
                nodes.append(U)
                queue.append(v)
            e = (min(u, v), max(u, v), tuple(sorted(gkey(T.summands[s]) for s in S)))
            if e not in seen_edges:
                seen_edges.add(e)
                edges.append((u, tuple(S), v))
    return MutationGraphResult(nodes, edges, complete, cutoff, index, blocked, nu_stable)


def enumerate_two_term(A, cutoff: int = DEFAULT_CUTOFF, cache: HomCache | None = None) -> MutationGraphResult:
    """Breadth-first exchange graph of two-term silting objects starting from ``A``."""
    cache = cache or HomCache()
    start = SiltingObject.stalk(A)

    def moves(T):
        return [((k,), [k]) for k in range(len(T))]

    return _bfs(start, moves, cutoff, cache, False)


def enumerate_two_term_nu_stable(A, nd, cutoff: int = DEFAULT_CUTOFF, cache: HomCache | None = None,
                                 verify: bool = False, seed: int = 0) -> MutationGraphResult:
    """Exchange graph of nu-stable two-term silting objects via orbit mutation."""
    cache = cache or HomCache()
    start = SiltingObject.stalk(A)

    def moves(T):
        perm = nu_permutation_of_summands(T, nd)
        if perm is None:
            raise ExchangeFailed("node is not nu-stable")
        return [(tuple(o), o) for o in summand_orbits(perm)]

    res = _bfs(start, moves, cutoff, cache, True)
    if verify:
        for T in res.nodes:
            if not is_nu_stable(T, nd, seed):
                raise ExchangeFailed("enumerated node is not nu-stable")
            if not negative_homs_vanish(T.summands):
                raise ExchangeFailed("enumerated node is not tilting")
    return res


def hasse_quiver(result: MutationGraphResult, check_covers: bool = True) -> nx.DiGraph:
    """Exchange edges oriented from larger to smaller in the silting order."""
    if not result.complete:
        raise PartialResult("partial result: Hasse quiver needs a complete enumeration")
    G = nx.DiGraph()
    G.add_nodes_from(range(len(result.nodes)))
    for u, label, v in result.edges:
        if order_ge(result.nodes[u], result.nodes[v]):
            G.add_edge(u, v, label=label)
        else:
            G.add_edge(v, u, label=label)
    if not nx.is_directed_acyclic_graph(G):
        raise RuntimeError("exchange quiver is not acyclic")
    if check_covers:
        for u, v in G.edges:
            for w in G.successors(u):
                if w != v and G.has_edge(w, v):
                    raise RuntimeError("an arrow is shortcut by a length-2 path")
    return G
