"""Bounded complexes of projectives, chain maps and Hom spaces up to homotopy.

A term ``X^d`` is a list of vertices ``[v_0, v_1, ...]`` standing for
``P(v_0) + P(v_1) + ...``.  The differential ``d^d: X^d -> X^{d+1}`` is an
array ``D`` of shape ``(len(X^{d+1}), len(X^d), dim A)``; the entry
``D[r, c]`` lies in ``e_{w_r} A e_{v_c}`` and acts by left multiplication.
Composition of such matrices uses ``(g f)[r, c] = sum_t g[r, t] * f[t, c]``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import linalg
from .algebra import AlgebraMap, FDAlgebra, StructureConstantAlgebra
from .linalg import matmul

log = logging.getLogger(__name__)

DEFAULT_MAX_WINDOW = 6
ISO_RETRIES = 20


class WindowOverflow(RuntimeError):
    pass


class NotVertexPermuting(ValueError):
    pass


class NonSplitLocal(ArithmeticError):
    pass


def _empty(rows: int, cols: int, d: int) -> np.ndarray:
    return np.zeros((rows, cols, d), dtype=np.int64)


def matrix_product(A: FDAlgebra, g: np.ndarray, f: np.ndarray) -> np.ndarray:
    """Product of matrices over ``A``: ``g`` is ``(R, T, d)``, ``f`` is ``(T, C, d)``."""
    R, T, d = g.shape
    C = f.shape[1]
    out = _empty(R, C, d)
    if T == 0 or R == 0 or C == 0:
        return out
    for r in range(R):
        for t in range(T):
            x = g[r, t]
            if not x.any():
                continue
            for c in range(C):
                y = f[t, c]
                if y.any():
                    out[r, c] = (out[r, c] + A.multiply(x, y)) % A.p
    return out


class ProjComplex:
    """Immutable bounded complex of finitely generated projectives."""

    def __init__(self, algebra: FDAlgebra, terms: dict, diffs: dict | None = None, check: bool = False):
        self.algebra = algebra
        d = algebra.dim
        self.terms = {int(k): tuple(int(v) for v in vs) for k, vs in terms.items() if len(vs)}
        self.diffs = {}
        diffs = diffs or {}
        for k in self.terms:
            if k + 1 in self.terms:
                D = diffs.get(k)
                shape = (len(self.terms[k + 1]), len(self.terms[k]), d)
                D = _empty(*shape) if D is None else np.asarray(D, dtype=np.int64) % algebra.p
                if D.shape != shape:
                    raise ValueError(f"differential in degree {k} has shape {D.shape}, expected {shape}")
                self.diffs[k] = D
        if check:
            self.validate()

    # ------------------------------------------------------------ basics
    @classmethod
    def stalk(cls, algebra: FDAlgebra, vertices, degree: int = 0) -> "ProjComplex":
        if isinstance(vertices, (int, np.integer)):
            vertices = [int(vertices)]
        return cls(algebra, {degree: list(vertices)})

    @classmethod
    def zero(cls, algebra: FDAlgebra) -> "ProjComplex":
        return cls(algebra, {})

    @property
    def degrees(self) -> list[int]:
        return sorted(self.terms)

    def term(self, k: int) -> tuple:
        return self.terms.get(k, ())

    def diff(self, k: int) -> np.ndarray:
        D = self.diffs.get(k)
        if D is None:
            return _empty(len(self.term(k + 1)), len(self.term(k)), self.algebra.dim)
        return D

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def window(self) -> tuple[int, int] | None:
        if not self.terms:
            return None
        return min(self.terms), max(self.terms)

    @property
    def width(self) -> int:
        w = self.window
        return 0 if w is None else w[1] - w[0]

    def multiplicities(self, k: int) -> np.ndarray:
        v = np.zeros(self.algebra.num_vertices, dtype=np.int64)
        for x in self.term(k):
            v[x] += 1
        return v

    def g_vector(self) -> np.ndarray:
        """Alternating sum of term classes, with degree 0 counted positively."""
        g = np.zeros(self.algebra.num_vertices, dtype=np.int64)
        for k in self.terms:
            g += (-1) ** (k % 2) * self.multiplicities(k)
        return g

    def num_summands(self) -> int:
        return sum(len(v) for v in self.terms.values())

    def validate(self) -> None:
        A = self.algebra
        for k, D in self.diffs.items():
            src, dst = self.terms[k], self.terms[k + 1]
            for r, w in enumerate(dst):
                for c, v in enumerate(src):
                    x = D[r, c]
                    bad = x.any() and np.any(x[(A.source != w) | (A.target != v)])
                    if bad:
                        raise ValueError(f"entry ({r},{c}) of d^{k} is not in e_w A e_v")
            if k + 1 in self.diffs:
                if np.any(matrix_product(A, self.diffs[k + 1], D)):
                    raise ValueError(f"d^{k + 1} d^{k} != 0")

    def is_minimal(self) -> bool:
        return _find_unit(self) is None

    def __repr__(self) -> str:
        labels = self.algebra.vertex_labels
        parts = []
        for k in self.degrees:
            parts.append(f"{k}:" + "+".join(f"P{labels[v]}" for v in self.terms[k]))
        return f"ProjComplex({' | '.join(parts) or '0'})"

    # ------------------------------------------------------------ serialization
    def to_json(self) -> dict:
        A = self.algebra
        out = {"degrees": {}, "differentials": {}}
        for k in self.degrees:
            out["degrees"][str(k)] = [_label_json(A.vertex_labels[v]) for v in self.terms[k]]
        for k, D in self.diffs.items():
            rows = []
            for r in range(D.shape[0]):
                rows.append([_element_json(A, D[r, c]) for c in range(D.shape[1])])
            out["differentials"][str(k)] = rows
        return out

    @classmethod
    def from_json(cls, A: FDAlgebra, data: dict) -> "ProjComplex":
        terms = {int(k): [A.vertex(_label_from_json(v)) for v in vs] for k, vs in data["degrees"].items()}
        index = {lab: k for k, lab in enumerate(A.basis_labels)}
        diffs = {}
        for k, rows in data.get("differentials", {}).items():
            D = _empty(len(rows), len(rows[0]) if rows else 0, A.dim)
            for r, row in enumerate(rows):
                for c, ent in enumerate(row):
                    for lab, coeff in ent:
                        D[r, c, index[lab]] = (D[r, c, index[lab]] + int(coeff)) % A.p
            diffs[int(k)] = D
        return cls(A, terms, diffs, check=True)


def _label_json(label):
    return list(label) if isinstance(label, tuple) else label


def _label_from_json(label):
    return tuple(label) if isinstance(label, list) else label


def _element_json(A: FDAlgebra, x) -> list:
    out = []
    for k in np.flatnonzero(x):
        c = int(x[k])
        if c > A.p // 2:
            c -= A.p
        out.append([A.basis_labels[k], c])
    return out


# ---------------------------------------------------------------- chain maps

@dataclass
class ChainMap:
    source: ProjComplex
    target: ProjComplex
    components: dict = field(default_factory=dict)  # degree -> (len(target^k), len(source^k), d)

    def component(self, k: int) -> np.ndarray:
        c = self.components.get(k)
        if c is None:
            return _empty(len(self.target.term(k)), len(self.source.term(k)), self.source.algebra.dim)
        return c

    def degrees(self) -> list[int]:
        return sorted(set(self.source.terms) & set(self.target.terms))

    def is_chain_map(self) -> bool:
        A = self.source.algebra
        for k in set(self.source.terms) | set(self.target.terms):
            lhs = matrix_product(A, self.target.diff(k), self.component(k))
            rhs = matrix_product(A, self.component(k + 1), self.source.diff(k))
            if not np.array_equal(lhs, rhs):
                return False
        return True

    def scale(self, c: int) -> "ChainMap":
        p = self.source.algebra.p
        return ChainMap(self.source, self.target, {k: v * c % p for k, v in self.components.items()})

    def __add__(self, other: "ChainMap") -> "ChainMap":
        p = self.source.algebra.p
        comps = {}
        for k in set(self.components) | set(other.components):
            comps[k] = (self.component(k) + other.component(k)) % p
        return ChainMap(self.source, self.target, comps)

    def top_matrix(self, k: int) -> np.ndarray:
        """Component ``k`` modulo the radical, as a scalar matrix (zero across vertices)."""
        A = self.source.algebra
        C = self.component(k)
        src, dst = self.source.term(k), self.target.term(k)
        M = np.zeros((len(dst), len(src)), dtype=np.int64)
        for r, w in enumerate(dst):
            for c, v in enumerate(src):
                if w == v:
                    M[r, c] = A.top_coefficient(C[r, c], v)
        return M

    def is_isomorphism_of_minimal(self) -> bool:
        """Degreewise invertibility modulo the radical (exact for minimal complexes)."""
        p = self.source.algebra.p
        for k in set(self.source.terms) | set(self.target.terms):
            if len(self.source.term(k)) != len(self.target.term(k)):
                return False
            M = self.top_matrix(k)
            if M.size and linalg.rank(M, p) < M.shape[0]:
                return False
        return True


def identity_map(X: ProjComplex) -> ChainMap:
    A = X.algebra
    comps = {}
    for k, vs in X.terms.items():
        C = _empty(len(vs), len(vs), A.dim)
        for r, v in enumerate(vs):
            C[r, r] = A.idempotents[v]
        comps[k] = C
    return ChainMap(X, X, comps)


def zero_map(X: ProjComplex, Y: ProjComplex) -> ChainMap:
    return ChainMap(X, Y, {})


def compose(g: ChainMap, f: ChainMap) -> ChainMap:
    """``g after f``."""
    A = f.source.algebra
    comps = {}
    for k in set(f.components) & set(g.components):
        comps[k] = matrix_product(A, g.components[k], f.components[k])
    return ChainMap(f.source, g.target, comps)


# ---------------------------------------------------------------- functors

def shift(X: ProjComplex, k: int = 1) -> ProjComplex:
    """``X[k]`` with ``X[k]^i = X^{i+k}`` and differential ``(-1)^k d``."""
    sign = -1 if k % 2 else 1
    terms = {i - k: vs for i, vs in X.terms.items()}
    diffs = {i - k: (sign * D) % X.algebra.p for i, D in X.diffs.items()}
    return ProjComplex(X.algebra, terms, diffs)


def shift_map(f: ChainMap, k: int = 1) -> ChainMap:
    return ChainMap(shift(f.source, k), shift(f.target, k), {i - k: C for i, C in f.components.items()})


def direct_sum(*Xs: ProjComplex) -> ProjComplex:
    A = Xs[0].algebra
    degs = sorted(set().union(*(X.terms for X in Xs)))
    terms = {k: sum((list(X.term(k)) for X in Xs), []) for k in degs}
    diffs = {}
    for k in degs:
        if k + 1 not in terms or not terms[k]:
            continue
        D = _empty(len(terms[k + 1]), len(terms[k]), A.dim)
        r0 = c0 = 0
        for X in Xs:
            nr, nc = len(X.term(k + 1)), len(X.term(k))
            D[r0:r0 + nr, c0:c0 + nc] = X.diff(k)
            r0 += nr
            c0 += nc
        diffs[k] = D
    return ProjComplex(A, terms, diffs)


def _pushforward(X: ProjComplex, theta: AlgebraMap) -> ProjComplex:
    if theta.perm is None:
        raise NotVertexPermuting("not vertex-permuting")
    A = X.algebra
    E = A.idempotents
    if not np.array_equal(theta(E), E[theta.perm]):
        raise NotVertexPermuting("not vertex-permuting")
    terms = {k: [theta.perm[v] for v in vs] for k, vs in X.terms.items()}
    diffs = {k: theta(D) for k, D in X.diffs.items()}
    return ProjComplex(A, terms, diffs)


def apply_automorphism(X: ProjComplex, theta: AlgebraMap) -> ProjComplex:
    """Restriction of scalars along a vertex-permuting automorphism.

    ``e_v A`` twisted by ``theta`` is isomorphic to ``e_w A`` with
    ``theta(e_w) = e_v``, via ``x -> theta(x)``; entries transform by
    ``theta^{-1}``.
    """
    if theta.perm is None:
        raise NotVertexPermuting("not vertex-permuting")
    return _pushforward(X, theta.inverse())


def apply_automorphism_map(f: ChainMap, theta: AlgebraMap) -> ChainMap:
    inv = theta.inverse()
    return ChainMap(_pushforward(f.source, inv), _pushforward(f.target, inv),
                    {k: inv(C) for k, C in f.components.items()})


def apply_nu(X: ProjComplex, nd) -> ProjComplex:
    """The Nakayama functor on a complex of projectives (self-injective algebras)."""
    return _pushforward(X, nd.twist)


# ---------------------------------------------------------------- cones and minimization

def cone(f: ChainMap, minimize_result: bool = True) -> ProjComplex:
    """Mapping cone ``X[1] + Y`` with ``d = [[-d_X, 0], [f, d_Y]]``."""
    X, Y = f.source, f.target
    A = X.algebra
    p = A.p
    degs = sorted({k - 1 for k in X.terms} | set(Y.terms))
    terms = {k: list(X.term(k + 1)) + list(Y.term(k)) for k in degs}
    diffs = {}
    for k in degs:
        if k + 1 not in terms:
            continue
        nx0, ny0 = len(X.term(k + 1)), len(Y.term(k))
        nx1, ny1 = len(X.term(k + 2)), len(Y.term(k + 1))
        D = _empty(nx1 + ny1, nx0 + ny0, A.dim)
        if nx1 and nx0:
            D[:nx1, :nx0] = (-X.diff(k + 1)) % p
        if ny1 and nx0:
            D[nx1:, :nx0] = f.component(k + 1)
        if ny1 and ny0:
            D[nx1:, nx0:] = Y.diff(k)
        diffs[k] = D
    out = ProjComplex(A, terms, diffs)
    return minimize(out) if minimize_result else out


def cocone(f: ChainMap, minimize_result: bool = True) -> ProjComplex:
    return shift(cone(f, minimize_result), -1)


def _find_unit(X: ProjComplex):
    A = X.algebra
    for k in sorted(X.diffs):
        D = X.diffs[k]
        src, dst = X.terms[k], X.terms[k + 1]
        for r, w in enumerate(dst):
            for c, v in enumerate(src):
                if w == v and D[r, c].any() and A.top_coefficient(D[r, c], v):
                    return k, r, c
    return None


def minimize(X: ProjComplex) -> ProjComplex:
    """Split off contractible summands ``P --u--> P`` with ``u`` a unit."""
    A = X.algebra
    p = A.p
    terms = {k: list(v) for k, v in X.terms.items()}
    diffs = {k: D.copy() for k, D in X.diffs.items()}
    while True:
        cur = ProjComplex(A, terms, diffs)
        hit = _find_unit(cur)
        if hit is None:
            return cur
        k, r, c = hit
        terms = {kk: list(v) for kk, v in cur.terms.items()}
        diffs = {kk: D.copy() for kk, D in cur.diffs.items()}
        D = diffs[k]
        v = terms[k][c]
        uinv = A.local_inverse(D[r, c], v)
        rows = [i for i in range(D.shape[0]) if i != r]
        cols = [j for j in range(D.shape[1]) if j != c]
        gamma = D[rows][:, [c]]  # (R-1, 1)
        beta = D[[r]][:, cols]  # (1, C-1)
        ub = matrix_product(A, uinv[None, None, :], beta)
        corr = matrix_product(A, gamma, ub)
        newD = (D[np.ix_(rows, cols)] - corr) % p
        diffs[k] = newD
        if k - 1 in diffs:
            diffs[k - 1] = diffs[k - 1][[j for j in range(diffs[k - 1].shape[0]) if j != c]]
        if k + 1 in diffs:
            diffs[k + 1] = diffs[k + 1][:, [j for j in range(diffs[k + 1].shape[1]) if j != r]]
        terms[k] = [terms[k][j] for j in cols]
        terms[k + 1] = [terms[k + 1][i] for i in rows]
        diffs = {kk: D2 for kk, D2 in diffs.items()
                 if terms.get(kk) and terms.get(kk + 1)}


# ---------------------------------------------------------------- Hom spaces

class HomSpace:
    """Degree-0 chain maps ``X -> Y`` modulo null-homotopic ones.

    Variables are corner coordinates of the components; ``reps`` are rows of
    coordinates representing a basis of the quotient.
    """

    def __init__(self, X: ProjComplex, Y: ProjComplex):
        self.source, self.target = X, Y
        A = X.algebra
        self.algebra = A
        p = A.p
        self.blocks = []  # (degree, r, c, corner indices, offset)
        self.block_at = {}
        off = 0
        for k in sorted(set(X.terms) & set(Y.terms)):
            for r, w in enumerate(Y.terms[k]):
                for c, v in enumerate(X.terms[k]):
                    idx = A.corner(w, v)
                    if idx.size:
                        self.block_at[(k, r, c)] = (idx, off)
                        self.blocks.append((k, r, c, idx, off))
                        off += idx.size
        self.nvars = off
        # homotopy variables h^k: X^k -> Y^{k-1}
        hblocks = {}
        hoff = 0
        for k in sorted(X.terms):
            if k - 1 not in Y.terms:
                continue
            for r, w in enumerate(Y.terms[k - 1]):
                for c, v in enumerate(X.terms[k]):
                    idx = A.corner(w, v)
                    if idx.size:
                        hblocks[(k, r, c)] = (idx, hoff)
                        hoff += idx.size
        self.nh = hoff
        D = self._cycle_equations()
        if self.nvars == 0:
            self.reps = np.zeros((0, 0), dtype=np.int64)
            self._basis = self.reps
            self._piv = np.zeros(0, dtype=np.int64)
            self._solve = np.zeros((0, 0), dtype=np.int64)
            self.homotopy_dim = 0
            return
        K = linalg.nullspace(D, p) if D.shape[0] else np.eye(self.nvars, dtype=np.int64)
        H = self._homotopy_matrix(hblocks)
        B = linalg.row_basis(H.T, p) if H.size else np.zeros((0, self.nvars), dtype=np.int64)
        self.homotopy_dim = B.shape[0]
        if K.shape[0] == B.shape[0]:
            self.reps = np.zeros((0, self.nvars), dtype=np.int64)
        else:
            self.reps = linalg.quotient_basis(K, B, p) if B.shape[0] else linalg.row_basis(K, p)
        Q = np.vstack([self.reps, B]) if B.shape[0] else self.reps
        self._basis = Q
        if Q.shape[0]:
            _, rk, piv = linalg.rref(Q, p)
            self._piv = piv[:rk]
            self._solve = linalg.inverse(Q[:, self._piv], p)[:, : self.reps.shape[0]]
        else:
            self._piv = np.zeros(0, dtype=np.int64)
            self._solve = np.zeros((0, 0), dtype=np.int64)

    @property
    def dim(self) -> int:
        return int(self.reps.shape[0])

    def __len__(self) -> int:
        return self.dim

    def _cycle_equations(self) -> np.ndarray:
        X, Y, A = self.source, self.target, self.algebra
        p = A.p
        rows = []
        for k in sorted(X.terms):
            if k + 1 not in Y.terms:
                continue
            for r, w in enumerate(Y.terms[k + 1]):
                for c, v in enumerate(X.terms[k]):
                    ridx = A.corner(w, v)
                    if ridx.size == 0:
                        continue
                    M = np.zeros((ridx.size, self.nvars), dtype=np.int64)
                    touched = False
                    if k in Y.terms:
                        dY = Y.diff(k)
                        for t in range(len(Y.terms[k])):
                            blk = self.block_at.get((k, t, c))
                            if blk is None or not dY[r, t].any():
                                continue
                            idx, off = blk
                            M[:, off:off + idx.size] += A.left_block(dY[r, t], idx, ridx)
                            touched = True
                    if k + 1 in X.terms:
                        dX = X.diff(k)
                        for t in range(len(X.terms[k + 1])):
                            blk = self.block_at.get((k + 1, r, t))
                            if blk is None or not dX[t, c].any():
                                continue
                            idx, off = blk
                            M[:, off:off + idx.size] -= A.right_block(dX[t, c], idx, ridx)
                            touched = True
                    if touched:
                        rows.append(M % p)
        if not rows:
            return np.zeros((0, self.nvars), dtype=np.int64)
        return np.vstack(rows)

    def _homotopy_matrix(self, hblocks) -> np.ndarray:
        """Matrix (nvars x nh) sending homotopy coordinates to ``d h + h d``."""
        X, Y, A = self.source, self.target, self.algebra
        p = A.p
        H = np.zeros((self.nvars, self.nh), dtype=np.int64)
        for (k, r, c, ridx, roff) in self.blocks:
            # d_Y^{k-1} h^k
            if k - 1 in Y.terms:
                dY = Y.diff(k - 1)
                for t in range(len(Y.terms[k - 1])):
                    hb = hblocks.get((k, t, c))
                    if hb is None or not dY[r, t].any():
                        continue
                    idx, off = hb
                    H[roff:roff + ridx.size, off:off + idx.size] += A.left_block(dY[r, t], idx, ridx)
            # h^{k+1} d_X^k
            if k + 1 in X.terms:
                dX = X.diff(k)
                for t in range(len(X.terms[k + 1])):
                    hb = hblocks.get((k + 1, r, t))
                    if hb is None or not dX[t, c].any():
                        continue
                    idx, off = hb
                    H[roff:roff + ridx.size, off:off + idx.size] += A.right_block(dX[t, c], idx, ridx)
        return H % p

    # ------------------------------------------------------------ conversions
    def to_map(self, coords) -> ChainMap:
        coords = np.asarray(coords, dtype=np.int64)
        A = self.algebra
        X, Y = self.source, self.target
        comps = {}
        for (k, r, c, idx, off) in self.blocks:
            if k not in comps:
                comps[k] = _empty(len(Y.terms[k]), len(X.terms[k]), A.dim)
            comps[k][r, c, idx] = coords[off:off + idx.size]
        return ChainMap(X, Y, comps)

    def to_coords(self, f: ChainMap) -> np.ndarray:
        v = np.zeros(self.nvars, dtype=np.int64)
        for (k, r, c, idx, off) in self.blocks:
            C = f.components.get(k)
            if C is not None:
                v[off:off + idx.size] = C[r, c, idx]
        return v

    def reduce(self, f) -> np.ndarray:
        """Coordinates of a chain map (or raw vectors, rows) in ``reps`` modulo homotopy."""
        if isinstance(f, ChainMap):
            f = self.to_coords(f)
        V = np.atleast_2d(np.asarray(f, dtype=np.int64))
        if self.dim == 0:
            return np.zeros((V.shape[0], 0), dtype=np.int64)
        return matmul(V[:, self._piv], self._solve, self.algebra.p)

    def basis_maps(self) -> list[ChainMap]:
        return [self.to_map(r) for r in self.reps]

    def random_map(self, rng) -> ChainMap:
        c = rng.integers(0, self.algebra.p, size=self.dim)
        return self.to_map(matmul(c[None, :], self.reps, self.algebra.p)[0] if self.dim else np.zeros(self.nvars, dtype=np.int64))

    def is_null_homotopic(self, f: ChainMap) -> bool:
        return not self.reduce(f).any()


def hom_space(X: ProjComplex, Y: ProjComplex, k: int = 0) -> HomSpace:
    """``Hom(X, Y[k])`` in the homotopy category."""
    return HomSpace(X, shift(Y, k) if k else Y)


def hom_dim(X: ProjComplex, Y: ProjComplex, k: int = 0) -> int:
    Z = shift(Y, k) if k else Y
    if not (set(X.terms) & set(Z.terms)):
        return 0
    return HomSpace(X, Z).dim


# ---------------------------------------------------------------- predicates

def _shift_range(Xs, Ys, positive: bool) -> range:
    lo = min(min(X.terms) for X in Xs)
    hi = max(max(X.terms) for X in Xs)
    lo2 = min(min(Y.terms) for Y in Ys)
    hi2 = max(max(Y.terms) for Y in Ys)
    # Hom(X, Y[i]) needs X^j and Y^{j+i}: i ranges over [lo2 - hi, hi2 - lo]
    if positive:
        return range(1, max(0, hi2 - lo) + 1)
    return range(min(0, lo2 - hi), 0)


def is_presilting(T: list[ProjComplex]) -> bool:
    T = [X for X in T if not X.is_zero()]
    if not T:
        return True
    for i in _shift_range(T, T, True):
        for X in T:
            for Y in T:
                if hom_dim(X, Y, i):
                    return False
    return True


def negative_homs_vanish(T: list[ProjComplex]) -> bool:
    T = [X for X in T if not X.is_zero()]
    if not T:
        return True
    for i in _shift_range(T, T, False):
        for X in T:
            for Y in T:
                if hom_dim(X, Y, i):
                    return False
    return True


def is_tilting(T: list[ProjComplex]) -> bool:
    return is_presilting(T) and negative_homs_vanish(T)


class CannotCertify(RuntimeError):
    pass


def is_silting_certified(T: list[ProjComplex], provenance=None) -> bool:
    """Silting certificate by the two-term criterion or by a replayable mutation provenance.

    Raises :class:`CannotCertify` when neither route applies.
    """
    if not is_presilting(T):
        return False
    A = T[0].algebra
    two_term = all(set(X.terms) <= {-1, 0} for X in T)
    if two_term and len(T) == A.num_vertices:
        return True
    if provenance is not None and provenance.get("certified"):
        return True
    raise CannotCertify("cannot certify generation")


# ---------------------------------------------------------------- endomorphisms

def end_radical(H: HomSpace) -> np.ndarray:
    """Radical of ``End(X)`` (rows in ``H.reps`` coordinates) via the top-map image."""
    p = H.algebra.p
    X = H.source
    maps = H.basis_maps()
    if not maps:
        return np.zeros((0, 0), dtype=np.int64)
    tops = [[f.top_matrix(k) for k in X.degrees] for f in maps]
    n = len(maps)
    G = np.zeros((n, n), dtype=np.int64)
    for a in range(n):
        for b in range(n):
            tr = 0
            for Ma, Mb in zip(tops[a], tops[b]):
                tr += int(np.trace(matmul(Ma, Mb, p)))
            G[a, b] = tr % p
    return linalg.nullspace(G, p)


def is_indecomposable(X: ProjComplex, H: HomSpace | None = None) -> bool:
    H = H or HomSpace(X, X)
    rad = end_radical(H)
    return H.dim - rad.shape[0] == 1


def is_isomorphic(X: ProjComplex, Y: ProjComplex, seed: int = 0, H: HomSpace | None = None) -> bool:
    """Randomized isomorphism test for minimal complexes (one-sided errors only)."""
    if X.degrees != Y.degrees:
        return False
    for k in X.degrees:
        if not np.array_equal(X.multiplicities(k), Y.multiplicities(k)):
            return False
    if X.is_zero():
        return True
    H = H or HomSpace(X, Y)
    if H.dim == 0:
        return False
    rng = np.random.default_rng(seed)
    for _ in range(ISO_RETRIES):
        if H.random_map(rng).is_isomorphism_of_minimal():
            return True
    log.warning("isomorphism test inconclusive after %d tries", ISO_RETRIES)
    return False


def end_algebra(T: list[ProjComplex], homs: dict | None = None, check_local: bool = True) -> StructureConstantAlgebra:
    """``End(T_0 + ... + T_{n-1})`` with the product ``u * v = u after v``.

    ``Hom(T_a, T_b)`` sits in the corner ``(b, a)``.
    """
    A = T[0].algebra
    p = A.p
    n = len(T)
    homs = homs if homs is not None else {}
    for a in range(n):
        for b in range(n):
            if (a, b) not in homs:
                homs[(a, b)] = HomSpace(T[a], T[b])
    if check_local:
        for a in range(n):
            H = homs[(a, a)]
            rad = end_radical(H)
            if H.dim - rad.shape[0] != 1:
                raise NonSplitLocal(f"summand {a} has End/rad of dimension {H.dim - rad.shape[0]} (non-split local ring or decomposable)")
    offsets = {}
    labels, source, target = [], [], []
    off = 0
    for b in range(n):
        for a in range(n):
            H = homs[(a, b)]
            offsets[(a, b)] = off
            for k in range(H.dim):
                labels.append(f"f[{a}->{b}]{k}")
                source.append(b)
                target.append(a)
            off += H.dim
    d = off
    maps = {key: H.basis_maps() for key, H in homs.items()}
    table = np.zeros((d, d, d), dtype=np.int64)
    for (a, b), Hab in homs.items():
        for (c, a2), Hca in homs.items():
            if a2 != a or Hab.dim == 0 or Hca.dim == 0:
                continue
            Hcb = homs[(c, b)]
            if Hcb.dim == 0:
                continue
            o1, o2, o3 = offsets[(a, b)], offsets[(c, a)], offsets[(c, b)]
            for i, u in enumerate(maps[(a, b)]):
                for j, v in enumerate(maps[(c, a)]):
                    table[o1 + i, o2 + j, o3:o3 + Hcb.dim] = Hcb.reduce(compose(u, v))[0]
    idem = np.zeros((n, d), dtype=np.int64)
    for a in range(n):
        H = homs[(a, a)]
        idem[a, offsets[(a, a)]:offsets[(a, a)] + H.dim] = H.reduce(identity_map(T[a]))[0]
    S = StructureConstantAlgebra(p, table, list(range(n)), labels, source, target, idem, verify=False)
    S.hom_spaces = homs
    S.hom_offsets = offsets
    return S
