"""End-to-end acceptance criteria.

Each test records one PASS/FAIL line in ``RESULTS``; the lines are printed in
the pytest terminal summary, and ``python tests/test_acceptance.py`` runs the
whole set directly.
"""
import contextlib
import itertools
import math
import time

import numpy as np
import pytest

from siltkit.complexes import (
    apply_automorphism, apply_nu, end_algebra, hom_dim, is_isomorphic, is_presilting, negative_homs_vanish,
)
from siltkit.constructions import (
    anm_dimension, anm_nakayama_perm, build_anm, build_nakayama_selfinjective, build_preprojective,
    gamma_quotient_construction, has_multiple_arrow, infiniteness_witness, psi_automorphism, tilde_construction,
    verify_anm_skew_iso, verify_prop_derived_class, verify_tilde_iso,
)
from siltkit.mutation import (
    HomCache, SiltingObject, enumerate_two_term, enumerate_two_term_nu_stable, gkey, hasse_quiver, is_nu_stable,
    left_mutation, nu_permutation_of_summands, nu_stable_orbit_mutation, order_ge, right_mutation,
    summand_orbits, two_term_exchange,
)
from siltkit.selfinjective import is_self_injective, nakayama_automorphism, nu_orbit_partition

RESULTS: dict[int, tuple[bool, str]] = {}

# regression constants, frozen after the first verified run
NU_STABLE_COUNT_A35 = 8
NU_STABLE_COUNT_A53 = 48
TWO_TERM_COUNT_D4 = 192


@contextlib.contextmanager
def criterion(k: int, title: str, limit: float):
    t0 = time.perf_counter()
    notes: list[str] = []
    ok = False
    try:
        yield notes
        ok = True
    finally:
        elapsed = time.perf_counter() - t0
        if ok and elapsed > limit:
            ok = False
            notes.append(f"too slow: limit {limit:.0f}s")
        detail = f"{title} [{elapsed:.1f}s / {limit:.0f}s]" + (f" {'; '.join(notes)}" if notes else "")
        RESULTS[k] = (ok, detail)
        print(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert elapsed <= limit, f"criterion {k} exceeded {limit}s ({elapsed:.1f}s)"


GRID = [(n, m) for n in range(1, 7) for m in range(1, 6)]


def test_criterion_01_dimension_formulas():
    with criterion(1, "dimension formulas on n<=6, m<=5", 10):
        for n, m in GRID:
            A = build_anm(n, m)
            assert A.dim == m * n * (n + 1) * (n + 2) // 6 == anm_dimension(n, m)
            for i, r in A.vertex_labels:
                assert A.projective_dim((i, r)) == i * (n - i + 1)


def test_criterion_02_nakayama_permutation():
    with criterion(2, "Nakayama permutation on n<=6, m<=5", 10):
        for n, m in GRID:
            A = build_anm(n, m)
            perm = nakayama_automorphism(A).perm
            for k, (i, r) in enumerate(A.vertex_labels):
                assert A.vertex_labels[perm[k]] == (n - i + 1, (r + i - n) % m)
                assert A.vertex_labels[perm[k]] == anm_nakayama_perm(n, m, i, r)


def brute_force_poset(nodes):
    """The relation M >= N on all pairs, with partial-order axioms checked."""
    N = len(nodes)
    ge = np.zeros((N, N), dtype=bool)
    for a, b in itertools.product(range(N), repeat=2):
        ge[a, b] = order_ge(nodes[a], nodes[b])
    assert ge.diagonal().all()
    assert not (ge & ge.T & ~np.eye(N, dtype=bool)).any()
    for a, b in itertools.product(range(N), repeat=2):
        if ge[a, b]:
            assert (ge[a] >= ge[b]).all()
    return ge


def covers(ge):
    N = ge.shape[0]
    out = set()
    for a, b in itertools.product(range(N), repeat=2):
        if a != b and ge[a, b]:
            if not any(c not in (a, b) and ge[a, c] and ge[c, b] for c in range(N)):
                out.add((a, b))
    return out


def test_criterion_03_preprojective_type_a_counts():
    with criterion(3, "two-term silting counts of preprojective A_2, A_3, A_4", 300) as notes:
        counts = {}
        for n, expected in ((2, 6), (3, 24), (4, 120)):
            A = build_preprojective("A", n)
            res = enumerate_two_term(A)
            counts[n] = len(res)
            assert res.complete and len(res) == expected
            if n <= 3:
                ge = brute_force_poset(res.nodes)
                top = SiltingObject.stalk(A)
                bottom = top.shifted(1)
                i_top, i_bottom = res.index[top.key()], res.index[bottom.key()]
                assert ge[i_top].all() and ge[:, i_bottom].all()
                G = hasse_quiver(res)
                assert set(G.edges) == covers(ge)
                assert all(ge[u, v] for u, v in G.edges)
        notes.append(f"counts {counts}")


def test_criterion_04_tilde_pipeline():
    with criterion(4, "tilde construction of the (2, 4) Nakayama algebra", 60):
        base = build_nakayama_selfinjective(2, 4)
        out = tilde_construction(base)
        T = out.algebra
        p = T.p
        assert sorted(T.quiver.arrows) == [("a+", 1, 2), ("a-", 1, 2), ("b+", 2, 1), ("b-", 2, 1)]

        def norm(rel):
            terms = sorted((tuple(path), c % p) for c, path in rel)
            inv = pow(terms[0][1], p - 2, p)
            return frozenset((path, c * inv % p) for path, c in terms)

        expected = [
            [(1, ["a+", "b+", "a+", "b+"])], [(1, ["b+", "a+", "b+", "a+"])],
            [(1, ["a-", "b-", "a-", "b-"])], [(1, ["b-", "a-", "b-", "a-"])],
            [(1, ["a+", "b-"])], [(1, ["a-", "b+"])], [(1, ["b+", "a-"])], [(1, ["b-", "a+"])],
            [(1, ["a+", "b+", "a+"]), (-1, ["a-", "b-", "a-"])],
            [(1, ["b+", "a+", "b+"]), (-1, ["b-", "a-", "b-"])],
        ]
        assert {norm(r) for r in out.relations} == {norm(r) for r in expected}
        assert T.dim == 12
        assert is_self_injective(T)
        nd = nakayama_automorphism(T)
        assert nu_orbit_partition(nd.perm)["nu_cyclic"]
        assert has_multiple_arrow(T)
        res = enumerate_two_term_nu_stable(T, nd, verify=True)
        stalk = SiltingObject.stalk(T)
        assert res.complete and set(res.keys()) == {stalk.key(), stalk.shifted(1).key()}
        cert = verify_tilde_iso(out, gamma_quotient_construction(base))
        assert cert["ok"] and cert["dim_tilde"] == cert["dim_gamma_quotient"] == 12


def test_criterion_05_infiniteness_witness():
    with criterion(5, "extended D4 idempotent subalgebra and cutoff overflow for A_{5,5}", 600) as notes:
        A = build_anm(5, 5)
        for r in range(5):
            w = infiniteness_witness(A, r)
            assert w["dim"] == 13
            assert w["path_count"] == 13 and w["hereditary"]
            assert w["extended_d4"]
        res = enumerate_two_term(A, cutoff=500)
        assert not res.complete and len(res) == 500
        notes.append("partial at 500 nodes")


def test_criterion_06_skew_group_iso():
    with criterion(6, "skew group algebra isomorphisms", 120):
        for n, m, p in ((3, 2, 5), (3, 4, 13), (5, 3, 7)):
            cert = verify_anm_skew_iso(n, m, p)
            assert len(cert["identities"]) == 7 and all(cert["identities"].values())
            assert cert["dims_equal"] and cert["dim_anm"] == cert["dim_skew"] == anm_dimension(n, m)
            assert cert["homomorphism"] and cert["surjective"] and cert["ok"]


def test_criterion_07_endomorphism_rings():
    with criterion(7, "End of orbit mutations is A_{n,m} again", 1800):
        for n, m, ell in ((3, 5, 1), (3, 5, 2), (5, 3, 1), (5, 3, 2), (5, 3, 3)):
            cert = verify_prop_derived_class(n, m, ell=ell)
            assert cert["dim_end"] == anm_dimension(n, m)
            for key in ("summand_gvectors_match", "dimension", "gabriel_quiver", "scalar_propagation",
                        "surjective", "hom_dimensions", "ok"):
                assert cert[key], (n, m, ell, key)


def psi_stable(T, psi):
    images = [apply_automorphism(X, psi) for X in T.summands]
    by_key = {gkey(X): X for X in T.summands}
    for Y in images:
        X = by_key.get(gkey(Y))
        if X is None or not is_isomorphic(Y, X):
            return False
    return True


NU_STABLE_COUNTS: dict[str, int] = {}


@pytest.mark.parametrize("n,m,expected", [(3, 5, NU_STABLE_COUNT_A35), (5, 3, NU_STABLE_COUNT_A53)])
def test_criterion_08_nu_stable_finiteness(n, m, expected):
    # both parameter sets report on one line; a failure in the first one keeps the line failing
    prior = RESULTS.get(8)
    with criterion(8, "nu-stable two-term tilting objects of A_{3,5} and A_{5,3}", 600) as notes:
        A = build_anm(n, m)
        nd = nakayama_automorphism(A)
        res = enumerate_two_term_nu_stable(A, nd, cutoff=2000, verify=True)
        assert res.complete and not res.blocked
        NU_STABLE_COUNTS[f"A_{n},{m}"] = len(res)
        notes.append(f"nodes {NU_STABLE_COUNTS}")
        assert len(res) == expected
        psi = psi_automorphism(A)
        for T in res.nodes:
            assert negative_homs_vanish(T.summands)
            assert psi_stable(T, psi)
        if prior is not None and not prior[0]:
            notes.append("an earlier parameter set failed")
            raise AssertionError("criterion 8 failed for an earlier parameter set")


def random_end_gram_nondegenerate(S, rng, tries=5):
    from siltkit import linalg

    for _ in range(tries):
        lam = rng.integers(0, S.p, S.dim)
        if linalg.rank(S.gram_matrix(lam), S.p) == S.dim:
            return True
    return False


def test_criterion_09_property_suite():
    from helpers import random_two_term

    with criterion(9, "200 random mutation steps and 100 Serre duality pairs", 900) as notes:
        algebras = [
            build_preprojective("A", 3),
            build_anm(3, 2),
            build_nakayama_selfinjective(2, 4),
            tilde_construction(build_nakayama_selfinjective(2, 4)).algebra,
            build_anm(3, 5),
        ]
        nds = [nakayama_automorphism(A) for A in algebras]
        caches = [HomCache() for _ in algebras]
        state = [SiltingObject.stalk(A) for A in algebras]
        rng = np.random.default_rng(2024)
        orbit_checks = end_checks = restarts = 0
        for step in range(200):
            a = step % len(algebras)
            A, nd, cache, T = algebras[a], nds[a], caches[a], state[a]
            k = int(rng.integers(0, len(T)))
            U = left_mutation(T, [k], cache)
            assert len(U) == len(T) and is_presilting(U.summands)
            assert order_ge(T, U) and not order_ge(U, T)
            V = right_mutation(U, [k], cache)
            assert V.key() == T.key() and is_isomorphic(V.summands[k], T.summands[k])
            perm = nu_permutation_of_summands(T, nd)
            if perm is not None and is_nu_stable(T, nd):
                orbits = summand_orbits(perm)
                orbit = orbits[int(rng.integers(0, len(orbits)))]
                W = nu_stable_orbit_mutation(T, orbit, nd, cache, verify=False)
                assert is_nu_stable(W, nd)
                orbit_checks += 1
                if step % 3 == 0:
                    S = end_algebra(W.summands)
                    assert random_end_gram_nondegenerate(S, rng)
                    end_checks += 1
            state[a] = two_term_exchange(T, k, cache)
            # the tilde algebra has infinitely many two-term objects; restart before terms pile up
            if sum(X.num_summands() for X in state[a].summands) > 3 * len(T):
                state[a] = SiltingObject.stalk(A)
                restarts += 1
        for q in range(100):
            a = q % len(algebras)
            A, nd = algebras[a], nds[a]
            X, Y = random_two_term(A, rng), random_two_term(A, rng)
            assert hom_dim(X, Y) == hom_dim(Y, apply_nu(X, nd))
        assert orbit_checks and end_checks
        notes.append(f"{orbit_checks} orbit mutations, {end_checks} End algebras, {restarts} walk restarts")


def test_criterion_10_weakly_symmetric_d4():
    with criterion(10, "two-term silting objects of preprojective D4 are nu-stable", 600) as notes:
        A = build_preprojective("D", 4)
        nd = nakayama_automorphism(A)
        assert nd.weakly_symmetric
        res = enumerate_two_term(A)
        assert res.complete and len(res) == TWO_TERM_COUNT_D4
        assert all(is_nu_stable(T, nd) for T in res.nodes)
        notes.append(f"{len(res)} nodes")


if __name__ == "__main__":
    import sys
    from pathlib import Path

    sys.path.insert(0, str(Path(__file__).parent))
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion")]
    for fn in tests:
        marks = getattr(fn, "pytestmark", [])
        params = [m for m in marks if m.name == "parametrize"]
        try:
            if params:
                for args in params[0].args[1]:
                    fn(*args)
            else:
                fn()
        except AssertionError:
            pass
    failed = [k for k, (ok, _) in RESULTS.items() if not ok]
    sys.exit(1 if failed or len(RESULTS) < 10 else 0)
