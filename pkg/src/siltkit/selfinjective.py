"""Frobenius forms, Nakayama permutations and Nakayama automorphisms.

Conventions: ``sigma(i)`` is the vertex with ``soc P(i) = S(sigma(i))`` and
``pi = sigma^{-1}`` is the vertex permutation of the Nakayama functor,
``nu P(i) = P(pi(i))``.  The stored Nakayama automorphism ``v`` satisfies
``form(ab) = form(b v(a))`` and maps ``e_i`` to ``e_{sigma(i)}``; the functor
``nu`` on projectives is the twist by ``twist = v^{-1}``, which sends ``e_i``
to ``e_{pi(i)}``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .algebra import AlgebraError, AlgebraMap, FDAlgebra, check_homomorphism, inner_conjugation
from .linalg import matmul

log = logging.getLogger(__name__)

ISO_RETRIES = 20
FORM_BUDGET = 100


class NoFrobeniusForm(AlgebraError):
    pass


class AutomorphismCheckFailed(AlgebraError):
    pass


@dataclass
class SelfInjectivity:
    selfinjective: bool
    sigma: list[int] | None = None
    witness: int | None = None
    reason: str = ""
    socles: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.selfinjective


@dataclass
class NakayamaData:
    form: np.ndarray
    perm: list[int]  # pi
    sigma: list[int]
    nakayama: AlgebraMap  # v, with form(ab) = form(b v(a))
    twist: AlgebraMap  # v^{-1}: the algebra map realizing nu on projectives

    @property
    def weakly_symmetric(self) -> bool:
        return all(i == j for i, j in enumerate(self.perm))


def _radical_generators(A: FDAlgebra) -> np.ndarray:
    arrows = getattr(A, "arrow_elements", None)
    if arrows is not None:
        gens = arrows()
        return np.array(gens) if gens else np.zeros((0, A.dim), dtype=np.int64)
    return A.radical_basis()


def right_socles(A: FDAlgebra) -> dict[int, np.ndarray]:
    """Basis rows of ``soc(e_i A)`` for every vertex ``i``."""
    p = A.p
    gens = _radical_generators(A)
    allidx = np.arange(A.dim)
    out = {}
    for i in range(A.num_vertices):
        idx = np.flatnonzero(A.source == i)
        if gens.shape[0]:
            M = np.vstack([A.right_block(g, idx, allidx) for g in gens])
            K = linalg.nullspace(M, p)
        else:
            K = np.eye(idx.size, dtype=np.int64)
        S = np.zeros((K.shape[0], A.dim), dtype=np.int64)
        S[:, idx] = K
        out[i] = S
    return out


def _pairing_matrix(A: FDAlgebra, i: int, k: int, f_corner: np.ndarray) -> np.ndarray:
    """``M[x, y] = f(x y)`` for ``x`` in ``e_i A`` and ``y`` in ``A e_k``."""
    X = np.flatnonzero(A.source == i)
    Y = np.flatnonzero(A.target == k)
    C = A.corner(i, k)
    sub = A.table[np.ix_(X, Y, C)]
    return np.tensordot(sub, f_corner, axes=(2, 0)) % A.p


def is_self_injective(A: FDAlgebra, seed: int = 0) -> SelfInjectivity:
    """Decide self-injectivity via simple socles and explicit ``P(i) = D(A e_sigma(i))``."""
    rng = np.random.default_rng(seed)
    socles = right_socles(A)
    sigma = []
    for i in range(A.num_vertices):
        S = socles[i]
        if S.shape[0] != 1:
            return SelfInjectivity(False, witness=i, reason=f"socle of P({A.vertex_labels[i]}) has dimension {S.shape[0]}",
                                   socles=socles)
        k = int(A.target[np.flatnonzero(S[0])[0]])
        sigma.append(k)
    if len(set(sigma)) != len(sigma):
        # a second projective with the same socle: that one cannot be injective
        seen = {}
        for i, k in enumerate(sigma):
            if k in seen:
                return SelfInjectivity(False, witness=i, socles=socles,
                                       reason=f"P({A.vertex_labels[seen[k]]}) and P({A.vertex_labels[i]}) share a socle")
            seen[k] = i
    for i, k in enumerate(sigma):
        if np.count_nonzero(A.source == i) != np.count_nonzero(A.target == k):
            return SelfInjectivity(False, witness=i, reason="dim P(i) differs from dim I(sigma(i))", socles=socles)
        C = A.corner(i, k)
        for _ in range(ISO_RETRIES):
            f = rng.integers(0, A.p, size=C.size)
            M = _pairing_matrix(A, i, k, f)
            if linalg.rank(M, A.p) == M.shape[0]:
                break
        else:
            log.warning("isomorphism P(%s) = D(A e_%s) inconclusive after %d tries",
                        A.vertex_labels[i], A.vertex_labels[k], ISO_RETRIES)
            return SelfInjectivity(False, witness=i, reason="no intertwiner found (inconclusive)", socles=socles)
    return SelfInjectivity(True, sigma=sigma, socles=socles)


def _form_is_nondegenerate(A: FDAlgebra, lam: np.ndarray) -> bool:
    G = A.gram_matrix(lam)
    return linalg.rank(G, A.p) == A.dim


def frobenius_form(A: FDAlgebra, seed: int = 0, info: SelfInjectivity | None = None) -> np.ndarray:
    """A linear form whose pairing ``(a, b) -> form(ab)`` is nondegenerate."""
    p = A.p
    info = info or is_self_injective(A, seed)
    if not info:
        raise NoFrobeniusForm(f"no form found: {info.reason}")
    lam = np.zeros(A.dim, dtype=np.int64)
    for i, S in info.socles.items():
        s = S[0]
        k = int(np.flatnonzero(s)[-1])
        lam[k] = linalg.inv_scalar(int(s[k]), p)
    if _form_is_nondegenerate(A, lam):
        return lam
    rng = np.random.default_rng(seed)
    corners = [A.corner(i, k) for i, k in enumerate(info.sigma)]
    for _ in range(FORM_BUDGET):
        lam = np.zeros(A.dim, dtype=np.int64)
        for C in corners:
            lam[C] = rng.integers(0, p, size=C.size)
        if _form_is_nondegenerate(A, lam):
            return lam
    raise NoFrobeniusForm("no form found within the search budget")


def top_vertices(A: FDAlgebra, x) -> dict[int, int]:
    """Nonzero ``c_j`` in ``x = sum c_j e_j`` modulo the radical."""
    out = {}
    for j in range(A.num_vertices):
        c = A.top_coefficient(x, j)
        if c:
            out[j] = c
    return out


def nakayama_automorphism(A: FDAlgebra, form: np.ndarray | None = None, seed: int = 0) -> NakayamaData:
    """Nakayama data with a vertex-permuting automorphism.

    The raw automorphism from ``G = V G^T`` is conjugated by a unit ``w`` so
    that idempotents map to idempotents; the form is adjusted to
    ``x -> form(x w)`` to keep ``form(ab) = form(b v(a))``.
    """
    p = A.p
    info = is_self_injective(A, seed)
    if not info:
        raise AlgebraError(f"algebra is not self-injective: {info.reason}")
    lam = frobenius_form(A, seed, info) if form is None else np.asarray(form, dtype=np.int64) % p
    G = A.gram_matrix(lam)
    V = matmul(G, linalg.inverse(G.T, p), p)
    sigma = []
    for i in range(A.num_vertices):
        tops = top_vertices(A, matmul(A.idempotents[i][None, :], V, p)[0])
        if len(tops) != 1:
            raise AutomorphismCheckFailed("automorphism check failed: idempotent image not primitive")
        sigma.append(next(iter(tops)))
    if sigma != info.sigma:
        raise AutomorphismCheckFailed("automorphism check failed: vertex action disagrees with socles")
    w = A.zero()
    E = A.idempotents
    for i in range(A.num_vertices):
        w = (w + A.multiply(E[sigma[i]], matmul(E[i][None, :], V, p)[0])) % p
    conj = inner_conjugation(A, w)
    Vp = matmul(V, conj.matrix, p)
    allidx = np.arange(A.dim)
    lam2 = matmul(A.right_block(w, allidx, allidx).T, lam[:, None], p)[:, 0]  # x -> lam(x w)
    G2 = A.gram_matrix(lam2)
    if linalg.rank(G2, p) != A.dim or not np.array_equal(G2, matmul(Vp, G2.T, p)):
        raise AutomorphismCheckFailed("automorphism check failed: form identity")
    if not np.array_equal(matmul(E, Vp, p), E[sigma]):
        raise AutomorphismCheckFailed("automorphism check failed: not vertex-permuting")
    if not check_homomorphism(A, A, Vp):
        raise AutomorphismCheckFailed("automorphism check failed: not multiplicative")
    v = AlgebraMap(Vp, p, sigma)
    pi = [0] * len(sigma)
    for i, k in enumerate(sigma):
        pi[k] = i
    return NakayamaData(form=lam2, perm=pi, sigma=sigma, nakayama=v, twist=v.inverse())


def nu_orbit_partition(perm: list[int]) -> dict:
    """Cycles of a vertex permutation plus the weakly-symmetric and nu-cyclic flags."""
    seen = set()
    orbits = []
    for start in range(len(perm)):
        if start in seen:
            continue
        orbit = []
        x = start
        while x not in seen:
            seen.add(x)
            orbit.append(x)
            x = perm[x]
        orbits.append(orbit)
    return {
        "orbits": orbits,
        "weakly_symmetric": all(len(o) == 1 for o in orbits),
        "nu_cyclic": len(orbits) == 1,
    }
