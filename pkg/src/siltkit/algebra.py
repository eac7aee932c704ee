"""Finite-dimensional algebras given by structure constants over F_p.

Every algebra here has a basis adapted to a complete set of orthogonal
idempotents ``e_0, ..., e_{k-1}``: each basis element ``x`` lies in a single
corner ``e_s x e_t``.  Products compose left to right, so a basis element in
``e_s A e_t`` behaves like a path from ``s`` to ``t``.
"""
from __future__ import annotations

import itertools
from functools import cached_property

import numpy as np

from . import linalg
from .linalg import matmul


class AlgebraError(ValueError):
    pass


class NotBasic(AlgebraError):
    pass


class FieldTooSmall(AlgebraError):
    pass


class FDAlgebra:
    """Shared behaviour of bound quiver algebras and structure-constant algebras."""

    def __init__(self, p, vertex_labels, basis_labels, source, target, idempotents):
        self.p = int(p)
        self.vertex_labels = list(vertex_labels)
        self.basis_labels = list(basis_labels)
        self.source = np.asarray(source, dtype=np.int64)
        self.target = np.asarray(target, dtype=np.int64)
        self.idempotents = np.asarray(idempotents, dtype=np.int64) % self.p
        self._vertex_index = {v: i for i, v in enumerate(self.vertex_labels)}
        self._corners: dict[tuple[int, int], np.ndarray] = {}

    # ------------------------------------------------------------ basics
    @property
    def dim(self) -> int:
        return len(self.basis_labels)

    @property
    def num_vertices(self) -> int:
        return len(self.vertex_labels)

    def vertex(self, label) -> int:
        """Index of a vertex given its label (indices pass through)."""
        if label in self._vertex_index:
            return self._vertex_index[label]
        if isinstance(label, (int, np.integer)) and 0 <= label < self.num_vertices:
            return int(label)
        raise KeyError(f"unknown vertex {label!r}")

    def corner(self, s: int, t: int) -> np.ndarray:
        """Basis indices lying in ``e_s A e_t``."""
        key = (s, t)
        idx = self._corners.get(key)
        if idx is None:
            idx = np.flatnonzero((self.source == s) & (self.target == t))
            self._corners[key] = idx
        return idx

    def zero(self) -> np.ndarray:
        return np.zeros(self.dim, dtype=np.int64)

    def unit(self) -> np.ndarray:
        return self.idempotents.sum(axis=0) % self.p

    def basis_vector(self, k: int) -> np.ndarray:
        v = self.zero()
        v[k] = 1
        return v

    @cached_property
    def table(self) -> np.ndarray:
        """Structure tensor ``T[a, b, c]`` = coefficient of basis ``c`` in ``a * b``."""
        return self._build_table()

    def _build_table(self) -> np.ndarray:  # pragma: no cover - abstract
        raise NotImplementedError

    # ------------------------------------------------------------ products
    def multiply(self, u, v) -> np.ndarray:
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        iu = np.flatnonzero(u)
        iv = np.flatnonzero(v)
        if iu.size == 0 or iv.size == 0:
            return self.zero()
        block = self.table[np.ix_(iu, iv)]  # (|u|, |v|, d)
        w = np.outer(u[iu], v[iv]) % self.p
        return matmul(w.reshape(1, -1), block.reshape(-1, self.dim), self.p)[0]

    def product(self, *elements) -> np.ndarray:
        out = elements[0]
        for x in elements[1:]:
            out = self.multiply(out, x)
        return out

    def left_block(self, u, cols: np.ndarray, rows: np.ndarray) -> np.ndarray:
        """Matrix of ``y -> u*y`` from coordinates on ``cols`` to coordinates on ``rows``."""
        u = np.asarray(u, dtype=np.int64)
        iu = np.flatnonzero(u)
        if iu.size == 0 or cols.size == 0 or rows.size == 0:
            return np.zeros((rows.size, cols.size), dtype=np.int64)
        sub = self.table[np.ix_(iu, cols, rows)]  # (|u|, cols, rows)
        M = np.tensordot(u[iu], sub, axes=(0, 0)) % self.p
        return M.T.copy()

    def right_block(self, u, cols: np.ndarray, rows: np.ndarray) -> np.ndarray:
        """Matrix of ``y -> y*u`` from coordinates on ``cols`` to coordinates on ``rows``."""
        u = np.asarray(u, dtype=np.int64)
        iu = np.flatnonzero(u)
        if iu.size == 0 or cols.size == 0 or rows.size == 0:
            return np.zeros((rows.size, cols.size), dtype=np.int64)
        sub = self.table[np.ix_(cols, iu, rows)]  # (cols, |u|, rows)
        M = np.tensordot(sub, u[iu], axes=(1, 0)) % self.p
        return M.T.copy()

    def left_matrix(self, u) -> np.ndarray:
        """Full ``d x d`` matrix (column convention) of left multiplication by ``u``."""
        allidx = np.arange(self.dim)
        return self.left_block(u, allidx, allidx)

    # ------------------------------------------------------------ local units
    def top_coefficient(self, x, v: int) -> int:
        """Scalar ``c`` with ``e_v x e_v = c e_v`` modulo the radical of the local corner."""
        idx = self.corner(v, v)
        x = np.asarray(x, dtype=np.int64)
        if not np.any(x[idx]):
            return 0
        L = self.left_block(x, idx, idx)
        return int(np.trace(L) % self.p) * linalg.inv_scalar(idx.size % self.p, self.p) % self.p

    def local_inverse(self, x, v: int) -> np.ndarray:
        """Inverse of a unit ``x`` of the local ring ``e_v A e_v`` (geometric series)."""
        p = self.p
        c = self.top_coefficient(x, v)
        if c == 0:
            raise ArithmeticError("element is not a unit of the local corner")
        ci = linalg.inv_scalar(c, p)
        e = self.idempotents[v]
        n = (e - ci * np.asarray(x)) % p  # c^{-1}x = e - n with n nilpotent
        out = e.copy()
        power = e.copy()
        for _ in range(self.dim + 1):
            power = self.multiply(power, n)
            if not power.any():
                break
            out = (out + power) % p
        else:  # pragma: no cover - n was not nilpotent
            raise ArithmeticError("corner is not local")
        return out * ci % p

    # ------------------------------------------------------------ checks
    def check_associative(self) -> bool:
        """Exhaustive ``(ab)c == a(bc)`` over composable basis triples."""
        T = self.table
        p = self.p
        d = self.dim
        nv = self.num_vertices
        for t in range(nv):
            A = np.flatnonzero(self.target == t)
            if A.size == 0:
                continue
            for u in range(nv):
                B = self.corner(t, u)
                C = np.flatnonzero(self.source == u)
                if B.size == 0 or C.size == 0:
                    continue
                AB = T[np.ix_(A, B)].reshape(-1, d)  # rows: a*b
                lhs = matmul(AB, T[:, C, :].reshape(d, -1), p).reshape(A.size, B.size, C.size, d)
                BC = T[np.ix_(B, C)].reshape(-1, d)  # rows: b*c
                rhs = np.stack([matmul(BC, T[a], p) for a in A]).reshape(A.size, B.size, C.size, d)
                if not np.array_equal(lhs, rhs):
                    return False
        return True

    def check_idempotents(self) -> bool:
        p = self.p
        E = self.idempotents
        for i, j in itertools.product(range(self.num_vertices), repeat=2):
            prod = self.multiply(E[i], E[j])
            want = E[i] if i == j else np.zeros_like(prod)
            if not np.array_equal(prod % p, want % p):
                return False
        one = self.unit()
        for k in range(self.dim):
            b = self.basis_vector(k)
            if not (np.array_equal(self.multiply(one, b), b) and np.array_equal(self.multiply(b, one), b)):
                return False
        return True

    # ------------------------------------------------------------ radical
    def trace_form_radical(self, indices: np.ndarray | None = None) -> np.ndarray:
        """Radical (rows, in full coordinates) of the subalgebra spanned by ``indices``.

        Uses the trace-form criterion ``rad B = {x : tr(L_{xy}) = 0 for all y}``,
        valid when ``p`` exceeds ``dim B``.  ``indices`` must span a subalgebra.
        """
        idx = np.arange(self.dim) if indices is None else np.asarray(indices)
        n = idx.size
        if self.p <= n:
            raise FieldTooSmall(f"trace-form radical needs p > {n}")
        if n == 0:
            return np.zeros((0, self.dim), dtype=np.int64)
        T = self.table[np.ix_(idx, idx, idx)]  # x_a * x_b in sub-coordinates
        # tr(L_{x_a x_b}) = sum_c T[a,b,c] * tr(L_{x_c}); tr(L_{x_c}) = sum_k T[c,k,k]
        tr = np.einsum("ckk->c", T) % self.p
        G = np.tensordot(T, tr, axes=(2, 0)) % self.p
        K = linalg.nullspace(G, self.p)
        out = np.zeros((K.shape[0], self.dim), dtype=np.int64)
        out[:, idx] = K
        return out

    def corner_algebra_indices(self, i: int) -> np.ndarray:
        return self.corner(i, i)

    def radical_basis(self) -> np.ndarray:
        """Radical assuming a basic decomposition (local, split corners); rows."""
        rows = []
        for i in range(self.num_vertices):
            for j in range(self.num_vertices):
                if i == j:
                    continue
                for k in self.corner(i, j):
                    rows.append(self.basis_vector(k))
        for i in range(self.num_vertices):
            idx = self.corner(i, i)
            rad = self.trace_form_radical(idx)
            if idx.size - rad.shape[0] != 1:
                raise NotBasic(f"corner at vertex {self.vertex_labels[i]!r} is not local with split top")
            rows.extend(rad)
        if not rows:
            return np.zeros((0, self.dim), dtype=np.int64)
        return linalg.row_basis(np.array(rows), self.p)

    def span_products(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        """Basis (rows) of ``span{x*y}`` for rows ``x`` of X, ``y`` of Y."""
        if X.shape[0] == 0 or Y.shape[0] == 0:
            return np.zeros((0, self.dim), dtype=np.int64)
        p = self.p
        d = self.dim
        # (x*y)_c = sum_ab x_a y_b T[a,b,c]
        XT = matmul(X, self.table.reshape(d, d * d), p).reshape(X.shape[0], d, d)
        prods = np.einsum("xbc,yb->xyc", XT, Y) % p
        return linalg.row_basis(prods.reshape(-1, d), p)

    def gram_matrix(self, form) -> np.ndarray:
        """``G[a, b] = form(x_a * x_b)``."""
        form = np.asarray(form, dtype=np.int64)
        return np.tensordot(self.table, form, axes=(2, 0)) % self.p

    def element_str(self, v) -> str:
        terms = []
        for k in np.flatnonzero(v):
            c = int(v[k])
            if c > self.p // 2:
                c -= self.p
            terms.append(f"{c}*{self.basis_labels[k]}")
        return " + ".join(terms) if terms else "0"


class StructureConstantAlgebra(FDAlgebra):
    """Algebra given by a multiplication table and distinguished idempotents."""

    def __init__(self, p, table, vertex_labels, basis_labels, source, target, idempotents,
                 verify: bool = True):
        super().__init__(p, vertex_labels, basis_labels, source, target, idempotents)
        self.__dict__["table"] = np.asarray(table, dtype=np.int64) % self.p
        if verify:
            if not self.check_associative():
                raise AlgebraError("multiplication table is not associative")
            if not self.check_idempotents():
                raise AlgebraError("distinguished idempotents are not orthogonal or do not sum to 1")
            self._check_corners()

    def _check_corners(self) -> None:
        E = self.idempotents
        for k in range(self.dim):
            b = self.basis_vector(k)
            s, t = self.source[k], self.target[k]
            if not (np.array_equal(self.multiply(E[s], b), b) and np.array_equal(self.multiply(b, E[t]), b)):
                raise AlgebraError(f"basis element {self.basis_labels[k]} is not in its declared corner")


def gabriel_presentation(S: FDAlgebra) -> dict:
    """Gabriel quiver of a basic algebra, with rad and rad^2 data.

    Arrows ``i -> j`` number ``dim e_i (rad/rad^2) e_j``; a representative of
    each arrow is returned as a full coordinate vector.
    """
    p = S.p
    rad = S.radical_basis()
    rad2 = S.span_products(rad, rad)
    arrows = []
    reps = {}
    for i in range(S.num_vertices):
        for j in range(S.num_vertices):
            idx = S.corner(i, j)
            if idx.size == 0:
                continue
            # restrict rad and rad^2 to the corner: both are sums of corner pieces
            r_c = _corner_part(rad, idx, S.dim, p)
            r2_c = _corner_part(rad2, idx, S.dim, p)
            q = linalg.quotient_basis(r_c, r2_c, p) if r_c.shape[0] else np.zeros((0, S.dim), dtype=np.int64)
            if q.shape[0]:
                arrows.append((i, j, q.shape[0]))
                reps[(i, j)] = q
    return {
        "vertices": list(S.vertex_labels),
        "arrows": [(S.vertex_labels[i], S.vertex_labels[j], c) for i, j, c in arrows],
        "arrow_index": arrows,
        "dim": S.dim,
        "dim_rad": int(rad.shape[0]),
        "dim_rad2": int(rad2.shape[0]),
        "representatives": reps,
        "rad": rad,
        "rad2": rad2,
    }


def _corner_part(rows: np.ndarray, idx: np.ndarray, d: int, p: int) -> np.ndarray:
    """Project rows onto the coordinates ``idx`` (corners are coordinate blocks)."""
    if rows.shape[0] == 0:
        return np.zeros((0, d), dtype=np.int64)
    out = np.zeros_like(rows)
    out[:, idx] = rows[:, idx]
    out = out[out.any(axis=1)]
    if out.shape[0] == 0:
        return np.zeros((0, d), dtype=np.int64)
    return linalg.row_basis(out, p)


def count_paths_acyclic(num_vertices: int, arrows: list[tuple[int, int, int]]) -> int | None:
    """Number of paths (including trivial ones) in a quiver; ``None`` if it has a cycle."""
    adj = np.zeros((num_vertices, num_vertices), dtype=object)
    for i, j, c in arrows:
        adj[i, j] += c
    total = num_vertices
    power = np.eye(num_vertices, dtype=object)
    for _ in range(num_vertices + 1):
        power = power.dot(adj)
        s = int(power.sum())
        if s == 0:
            return total
        total += s
    return None


def check_homomorphism(A: FDAlgebra, B: FDAlgebra, M: np.ndarray) -> bool:
    """Whether ``x -> x @ M`` is a unital algebra map ``A -> B`` (exhaustive on composable pairs).

    Non-composable basis products vanish in ``A``; their images vanish once the
    idempotent images are orthogonal, which is checked here as well.
    """
    p = B.p
    M = np.asarray(M, dtype=np.int64) % p
    E = matmul(A.idempotents, M, p)
    for i in range(A.num_vertices):
        for j in range(A.num_vertices):
            want = E[i] if i == j else B.zero()
            if not np.array_equal(B.multiply(E[i], E[j]), want):
                return False
    if not np.array_equal(matmul(A.unit()[None, :], M, p)[0], B.unit()):
        return False
    TA = A.table
    TB = B.table
    for t in range(A.num_vertices):
        left = np.flatnonzero(A.target == t)
        right = np.flatnonzero(A.source == t)
        if left.size == 0 or right.size == 0:
            continue
        lhs = matmul(TA[np.ix_(left, right)].reshape(-1, A.dim), M, p)
        Xr = M[right]
        sup_r = np.flatnonzero(Xr.any(axis=0))
        rows = []
        for a in left:
            xa = M[a]
            sup_a = np.flatnonzero(xa)
            if sup_a.size == 0 or sup_r.size == 0:
                rows.append(np.zeros((right.size, B.dim), dtype=np.int64))
                continue
            # R[c, :] = x_a * y_c for basis y_c of B in the support of the images
            R = np.tensordot(xa[sup_a], TB[np.ix_(sup_a, sup_r)], axes=(0, 0)) % p
            rows.append(matmul(Xr[:, sup_r], R, p))
        rhs = np.vstack(rows)
        if not np.array_equal(lhs, rhs):
            return False
    return True


class AlgebraMap:
    """Linear map ``x -> x @ matrix`` between algebras, optionally vertex-permuting."""

    def __init__(self, matrix: np.ndarray, p: int, perm: list[int] | None = None):
        self.matrix = np.asarray(matrix, dtype=np.int64) % p
        self.p = p
        self.perm = None if perm is None else [int(x) for x in perm]

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        return matmul(x.reshape(-1, x.shape[-1]), self.matrix, self.p).reshape(x.shape[:-1] + (self.matrix.shape[1],))

    def inverse(self) -> "AlgebraMap":
        perm = None
        if self.perm is not None:
            perm = [0] * len(self.perm)
            for i, j in enumerate(self.perm):
                perm[j] = i
        return AlgebraMap(linalg.inverse(self.matrix, self.p), self.p, perm)

    def compose(self, other: "AlgebraMap") -> "AlgebraMap":
        """``self after other``."""
        perm = None
        if self.perm is not None and other.perm is not None:
            perm = [self.perm[j] for j in other.perm]
        return AlgebraMap(matmul(other.matrix, self.matrix, self.p), self.p, perm)

    def power(self, k: int) -> "AlgebraMap":
        out = AlgebraMap(np.eye(self.matrix.shape[0], dtype=np.int64), self.p,
                         None if self.perm is None else list(range(len(self.perm))))
        base = self if k >= 0 else self.inverse()
        for _ in range(abs(k)):
            out = base.compose(out)
        return out

    def is_identity(self) -> bool:
        return np.array_equal(self.matrix, np.eye(self.matrix.shape[0], dtype=np.int64))


def inner_conjugation(A: FDAlgebra, w) -> AlgebraMap:
    """The automorphism ``x -> w x w^{-1}`` for a unit ``w``."""
    p = A.p
    allidx = np.arange(A.dim)
    Lw = A.left_block(w, allidx, allidx)
    winv = linalg.solve(Lw, A.unit(), p)[0]
    Rwinv = A.right_block(winv, allidx, allidx)
    # column convention L, R; row convention matrix is the transpose
    return AlgebraMap(matmul(Rwinv, Lw, p).T.copy(), p)
