"""Command-line interface.  Every command prints one JSON document with a run manifest.

Exit codes: 0 success, 1 usage error, 2 computation error, 3 verification failure.
"""
from __future__ import annotations

import json
import sys
import time

import click
import numpy as np

from . import linalg
from .algebra import AlgebraError
from .linalg import DEFAULT_PRIME

EXIT_USAGE, EXIT_COMPUTE, EXIT_VERIFY = 1, 2, 3


class VerificationExit(Exception):
    def __init__(self, payload):
        self.payload = payload


def _emit(ctx, command: str, inputs: dict, payload: dict, ok: bool = True) -> None:
    from .io import RunManifest

    obj = ctx.obj
    prime = obj.get("effective_prime") or obj["prime"] or DEFAULT_PRIME
    manifest = RunManifest(command, inputs, obj["seed"], prime, _start=obj["start"]).finish()
    doc = {"manifest": manifest.to_json(), "result": payload}
    text = json.dumps(doc, indent=2, default=_json_default)
    click.echo(text)
    if obj.get("json_path"):
        with open(obj["json_path"], "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    if not ok:
        raise VerificationExit(doc)


def _json_default(x):
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, tuple):
        return list(x)
    return str(x)


def _load(ctx, path):
    from .io import parse_algebra_file

    spec = parse_algebra_file(path)
    A = spec.build(ctx.obj["prime"])
    ctx.obj["effective_prime"] = A.p
    return A


def _label(v):
    return list(v) if isinstance(v, tuple) else v


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--field-prime", "prime", type=int, default=None, help="Prime modulus (default 1000003 or the file's).")
@click.option("--seed", type=int, default=0, show_default=True, help="Seed for randomized checks.")
@click.option("--cutoff", type=int, default=2000, show_default=True, help="Node cutoff for enumerations.")
@click.option("--max-window", type=int, default=6, show_default=True, help="Maximal complex width for mutation.")
@click.option("--json", "json_path", type=click.Path(dir_okay=False), default=None,
              help="Also write the JSON output to this file.")
@click.option("--dot", "dot_path", type=click.Path(dir_okay=False), default=None,
              help="Write graph output (DOT) to this file.")
@click.pass_context
def cli(ctx, prime, seed, cutoff, max_window, json_path, dot_path):
    """Silting mutation toolkit."""
    if prime is not None:
        linalg.check_prime(prime)
    ctx.obj = {"start": time.perf_counter(), "prime": prime, "seed": seed, "cutoff": cutoff, "max_window": max_window,
               "json_path": json_path, "dot_path": dot_path}


# ---------------------------------------------------------------- algebra

@cli.group()
def algebra():
    """Inspect algebras given as files."""


@algebra.command("check-selfinjective")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def check_selfinjective(ctx, path):
    from .selfinjective import is_self_injective, nakayama_automorphism, nu_orbit_partition

    A = _load(ctx, path)
    info = is_self_injective(A, ctx.obj["seed"])
    out = {"dim": A.dim, "selfinjective": info.selfinjective}
    if info:
        nd = nakayama_automorphism(A, seed=ctx.obj["seed"])
        part = nu_orbit_partition(nd.perm)
        out["permutation"] = {str(_label(A.vertex_labels[i])): _label(A.vertex_labels[j]) for i, j in enumerate(nd.perm)}
        out["weakly_symmetric"] = part["weakly_symmetric"]
        out["nu_cyclic"] = part["nu_cyclic"]
        out["orbits"] = [[_label(A.vertex_labels[v]) for v in o] for o in part["orbits"]]
    else:
        out["reason"] = info.reason
        out["witness"] = None if info.witness is None else _label(A.vertex_labels[info.witness])
    _emit(ctx, "algebra check-selfinjective", {"file": path}, out)


@algebra.command("info")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def info(ctx, path):
    A = _load(ctx, path)
    out = dict(A.summary())
    out["basis"] = A.basis_labels
    _emit(ctx, "algebra info", {"file": path}, out)


# ---------------------------------------------------------------- silting

@cli.group()
def silting():
    """Two-term silting enumeration and mutation."""


def _enumerate(ctx, A, nu_stable, cutoff=None):
    from .mutation import enumerate_two_term, enumerate_two_term_nu_stable
    from .selfinjective import nakayama_automorphism

    if cutoff is not None:
        ctx.obj["cutoff"] = cutoff
    if nu_stable:
        nd = nakayama_automorphism(A, seed=ctx.obj["seed"])
        return enumerate_two_term_nu_stable(A, nd, ctx.obj["cutoff"], seed=ctx.obj["seed"])
    return enumerate_two_term(A, ctx.obj["cutoff"])


@silting.command("enumerate")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--nu-stable", is_flag=True, help="Only nu-stable objects, via orbit mutation.")
@click.option("--cutoff", type=int, default=None, help="Override the global node cutoff.")
@click.pass_context
def enumerate_cmd(ctx, path, nu_stable, cutoff):
    A = _load(ctx, path)
    res = _enumerate(ctx, A, nu_stable, cutoff)
    _emit(ctx, "silting enumerate", {"file": path, "nu_stable": nu_stable, "cutoff": ctx.obj["cutoff"]},
          res.to_json())


@silting.command("mutate")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--orbit", type=int, default=None, help="Index of a nu-orbit of vertices (self-injective input).")
@click.option("--summand", type=int, multiple=True, help="Summand index (repeatable).")
@click.option("--right", is_flag=True, help="Right mutation instead of left.")
@click.pass_context
def mutate_cmd(ctx, path, orbit, summand, right):
    """Mutate the stalk complex A at an orbit or at chosen summands."""
    from .mutation import SiltingObject, left_mutation, right_mutation
    from .selfinjective import nakayama_automorphism, nu_orbit_partition

    if (orbit is None) == (not summand):
        raise click.UsageError("give exactly one of --orbit or --summand")
    A = _load(ctx, path)
    if orbit is not None:
        nd = nakayama_automorphism(A, seed=ctx.obj["seed"])
        orbits = nu_orbit_partition(nd.perm)["orbits"]
        if not 0 <= orbit < len(orbits):
            raise click.UsageError(f"orbit index must lie in [0, {len(orbits) - 1}]")
        S = orbits[orbit]
    else:
        S = list(summand)
        if any(not 0 <= s < A.num_vertices for s in S):
            raise click.UsageError("summand index out of range")
    fn = right_mutation if right else left_mutation
    U = fn(SiltingObject.stalk(A), S, max_window=ctx.obj["max_window"])
    _emit(ctx, "silting mutate", {"file": path, "orbit": orbit, "summands": S, "right": right}, U.to_json())


@silting.command("hasse")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--nu-stable", is_flag=True)
@click.option("--cutoff", type=int, default=None, help="Override the global node cutoff.")
@click.pass_context
def hasse_cmd(ctx, path, nu_stable, cutoff):
    from .io import emit_dot, label_graph
    from .mutation import hasse_quiver

    A = _load(ctx, path)
    res = _enumerate(ctx, A, nu_stable, cutoff)
    G = label_graph(hasse_quiver(res), res)
    dot = emit_dot(G, "hasse")
    if ctx.obj["dot_path"]:
        with open(ctx.obj["dot_path"], "w", encoding="utf-8") as fh:
            fh.write(dot)
    _emit(ctx, "silting hasse", {"file": path, "nu_stable": nu_stable},
          {"nodes": G.number_of_nodes(), "arrows": G.number_of_edges(), "dot": dot})


# ---------------------------------------------------------------- constructions

@cli.group()
def construct():
    """Build algebras from the supported families."""


def _emit_algebra(ctx, name, inputs, A):
    from .io import spec_from_algebra, spec_to_json

    out = {"summary": A.summary(), "algebra": spec_to_json(spec_from_algebra(A))}
    _emit(ctx, f"construct {name}", inputs, out)


@construct.command("anm")
@click.option("--n", "n", type=int, required=True)
@click.option("--m", "m", type=int, required=True)
@click.pass_context
def construct_anm(ctx, n, m):
    from .constructions import build_anm

    _emit_algebra(ctx, "anm", {"n": n, "m": m}, build_anm(n, m, ctx.obj["prime"] or DEFAULT_PRIME))


@construct.command("preprojective")
@click.option("--type", "kind", type=click.Choice(["A", "D", "E"], case_sensitive=False), required=True)
@click.option("--rank", type=int, required=True)
@click.pass_context
def construct_preprojective(ctx, kind, rank):
    from .constructions import build_preprojective

    _emit_algebra(ctx, "preprojective", {"type": kind, "rank": rank},
                  build_preprojective(kind, rank, ctx.obj["prime"] or DEFAULT_PRIME))


@construct.command("nakayama")
@click.option("--simples", type=int, required=True)
@click.option("--loewy", type=int, required=True)
@click.pass_context
def construct_nakayama(ctx, simples, loewy):
    from .constructions import build_nakayama_selfinjective

    _emit_algebra(ctx, "nakayama", {"simples": simples, "loewy": loewy},
                  build_nakayama_selfinjective(simples, loewy, ctx.obj["prime"] or DEFAULT_PRIME))


@construct.command("tilde")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def construct_tilde(ctx, path):
    from .constructions import tilde_construction

    out = tilde_construction(_load(ctx, path))
    _emit_algebra(ctx, "tilde", {"file": path}, out.algebra)


@construct.command("gamma")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def construct_gamma(ctx, path):
    from .constructions import gamma_quotient_construction

    S = gamma_quotient_construction(_load(ctx, path))
    _emit(ctx, "construct gamma", {"file": path},
          {"dim": S.dim, "basis": S.basis_labels, "frobenius_form": S.frobenius_form.tolist()})


@construct.command("skew")
@click.option("--n", "n", type=int, required=True)
@click.option("--m", "m", type=int, required=True)
@click.pass_context
def construct_skew(ctx, n, m):
    from .constructions import build_anm, skew_group_algebra

    p = ctx.obj["prime"] or linalg.prime_congruent_one(m)
    S = skew_group_algebra(build_anm(n, 1, p), m)
    ctx.obj["effective_prime"] = p
    _emit(ctx, "construct skew", {"n": n, "m": m}, {"dim": S.dim, "p": p, "zeta": S.zeta, "basis": S.basis_labels})


# ---------------------------------------------------------------- verification

@cli.group()
def verify():
    """Run isomorphism certificates."""


@verify.command("tilde-iso")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def verify_tilde(ctx, path):
    from .constructions import gamma_quotient_construction, tilde_construction, verify_tilde_iso

    A = _load(ctx, path)
    cert = verify_tilde_iso(tilde_construction(A), gamma_quotient_construction(A))
    _emit(ctx, "verify tilde-iso", {"file": path}, cert, cert["ok"])


@verify.command("skew-iso")
@click.option("--n", "n", type=int, required=True)
@click.option("--m", "m", type=int, required=True)
@click.pass_context
def verify_skew(ctx, n, m):
    from .constructions import verify_anm_skew_iso

    cert = verify_anm_skew_iso(n, m, ctx.obj["prime"])
    ctx.obj["effective_prime"] = cert["p"]
    _emit(ctx, "verify skew-iso", {"n": n, "m": m}, cert, cert["ok"])


@verify.command("derived-class")
@click.option("--n", "n", type=int, required=True)
@click.option("--m", "m", type=int, required=True)
@click.option("--ell", type=int, default=1, show_default=True)
@click.pass_context
def verify_derived(ctx, n, m, ell):
    from .constructions import verify_prop_derived_class

    cert = verify_prop_derived_class(n, m, ctx.obj["prime"] or DEFAULT_PRIME, ell)
    _emit(ctx, "verify derived-class", {"n": n, "m": m, "ell": ell}, cert, cert["ok"])


def main(argv=None) -> int:
    from .io import AlgebraFileError

    try:
        cli.main(args=argv, prog_name="siltkit", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except (click.UsageError, click.BadParameter) as exc:
        exc.show()
        return EXIT_USAGE
    except click.Abort:
        return EXIT_USAGE
    except VerificationExit:
        return EXIT_VERIFY
    except AssertionError as exc:
        click.echo(f"verification failure: {exc}", err=True)
        return EXIT_VERIFY
    except (AlgebraFileError, AlgebraError, ValueError, ArithmeticError, RuntimeError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_COMPUTE
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
