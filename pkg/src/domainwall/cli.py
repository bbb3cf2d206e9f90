"""Command-line interface.

Exit codes: 0 success, 1 a verified property or search failed, 2 usage or
input error.
"""

from __future__ import annotations

import functools
import sys

import click
import numpy as np

from . import experiment as exp
from . import io as dio
from .embedding import EmbedParams, find_embedding
from .encoding import EncodedProblem, Encoding
from .exceptions import DomainWallError
from .hardware import chimera, pegasus
from .ising import brute_force, spins_to_bits
from .mixers import MAX_CHECK_M, check_subspace_preservation
from .problems import build_problem, gen_coloring, gen_scheduling, gen_unstructured
from .verify import verify_all


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise click.BadParameter(f"expected comma-separated integers, got {text!r}") from None


def _choices(value: str, allowed: tuple[str, ...]) -> tuple[str, ...]:
    return allowed if value == "both" else (value,)


def _emit(text: str, output: str | None) -> None:
    if output in (None, "-"):
        click.echo(text, nl=False)
    else:
        with open(output, "w") as f:
            f.write(text)


def input_errors(fn):
    """Report bad input files and domain errors as usage errors (exit 2)."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except BrokenPipeError:
            raise
        except (DomainWallError, OSError, ValueError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)

    return wrapper


@click.group()
def main():
    """Domain-wall and one-hot encodings of discrete optimisation problems."""


@main.command("gen-instance")
@click.argument("kind", type=click.Choice(["coloring", "three-color", "n-color", "scheduling", "unstructured"]))
@click.option("--size", type=int, default=4, show_default=True, help="Vertices, colours (n-color) or events.")
@click.option("--colors", type=int, default=3, show_default=True, help="Colours for plain coloring.")
@click.option("--p", "p", type=float, default=0.5, show_default=True, help="Edge probability for plain coloring.")
@click.option("--sizes", default="3,3,3", show_default=True, help="Domain sizes for unstructured instances.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("-o", "output", default=None, help="Output file (default stdout).")
@input_errors
def gen_instance(kind, size, colors, p, sizes, seed, output):
    """Generate a random problem instance as JSON."""
    if kind == "coloring":
        inst = gen_coloring(size, colors, p, seed)
    elif kind == "unstructured":
        inst = gen_unstructured(_int_list(sizes), seed)
    elif kind == "scheduling":
        inst = gen_scheduling(size, seed)
    else:
        inst = exp.make_instance(kind, size, seed)
    _emit(dio.write_json(dio.instance_to_json(inst), None), output)


@main.command()
@click.argument("instance", type=click.Path(exists=True, dir_okay=False))
@click.option("--encoding", type=click.Choice(["dw", "onehot"]), default="dw", show_default=True)
@click.option("--lam", type=float, default=None, help="Core strength (default: recommended per variable).")
@click.option("-o", "output", default=None)
@input_errors
def encode(instance, encoding, lam, output):
    """Compile an instance JSON into an Ising model JSON."""
    inst = dio.instance_from_json(dio.read_json(instance))
    p = build_problem(inst, Encoding.parse(encoding), lam)
    _emit(dio.write_json(dio.problem_to_json(p), None), output)


@main.command("solve-exact")
@click.argument("model", type=click.Path(exists=True, dir_okay=False))
@click.option("--max-qubits", type=int, default=26, show_default=True)
@click.option("-o", "output", default=None, help="Write the result as JSON.")
@input_errors
def solve_exact(model, max_qubits, output):
    """Enumerate every state of a model and report the ground manifold."""
    d = dio.read_json(model)
    p = dio.problem_from_json(d)
    g = brute_force(p.model, max_qubits=max_qubits)
    states = []
    for s in g.states:
        decoded = p.decode(s) if p.variables else None
        states.append({"bits": spins_to_bits(s), "values": decoded})
    result = {"energy": g.energy, "gap": None if np.isinf(g.spectrum_gap) else g.spectrum_gap, "states": states}
    if output:
        dio.write_json(result, output)
    click.echo(f"ground energy {g.energy:.12g}, {len(states)} ground state(s), gap {result['gap']}")
    for st in states:
        click.echo(f"  {st['bits']}" + (f"  values {st['values']}" if st["values"] is not None else ""))


@main.group()
def verify():
    """Run property checks."""


@verify.command("mixer")
@click.option("--m", "m", type=click.IntRange(2, MAX_CHECK_M), required=True)
def verify_mixer(m):
    """Check that the domain-wall mixer for Z_m conserves the wall number."""
    p = EncodedProblem()
    rep = check_subspace_preservation(p.add_domain_wall_variable(m))
    click.echo(rep.format())
    click.echo("valid block:")
    click.echo(rep.block_csv())
    sys.exit(0 if rep.passed else 1)


@verify.command("all")
def verify_all_cmd():
    """Run every module's property suite."""
    sys.exit(0 if verify_all(click.echo) else 1)


@main.command()
@click.argument("family", type=click.Choice(["chimera", "pegasus"]))
@click.option("--L", "L", type=click.IntRange(1, 32), required=True)
@click.option("-o", "output", default=None)
@input_errors
def hwgraph(family, L, output):
    """Write a Chimera or Pegasus hardware graph as JSON."""
    g = chimera(L) if family == "chimera" else pegasus(L)
    _emit(dio.write_json(g.to_json(), None), output)


@main.command()
@click.argument("source", type=click.Path(exists=True, dir_okay=False))
@click.argument("target", type=click.Path(exists=True, dir_okay=False))
@click.option("--tries", type=click.IntRange(min=1), default=10, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--rounds", type=click.IntRange(min=1), default=EmbedParams.rounds, show_default=True)
@click.option("-o", "output", default=None)
@input_errors
def embed(source, target, tries, seed, rounds, output):
    """Minor-embed a model or graph JSON into a target graph JSON."""
    src = dio.load_source_graph(dio.read_json(source))
    tgt = dio.graph_from_json(dio.read_json(target))
    params = EmbedParams(max_tries=tries, seed=seed, rounds=rounds)
    e = find_embedding(src, tgt, params)
    if e is None:
        click.echo(f"no embedding found in {tries} tries", err=True)
        sys.exit(1)
    _emit(dio.write_json(e.to_json(), None), output)


@main.command()
@click.argument("problem", type=click.Choice(list(exp.PROBLEMS)))
@click.option("--sizes", required=True, help="Comma-separated size parameters.")
@click.option("--instances", type=click.IntRange(min=1), default=10, show_default=True)
@click.option("--encoding", type=click.Choice(["dw", "onehot", "both"]), default="both", show_default=True)
@click.option("--target", type=click.Choice(["chimera", "pegasus", "both"]), default="both", show_default=True)
@click.option("--tries", type=click.IntRange(min=1), default=10, show_default=True)
@click.option("--rounds", type=click.IntRange(min=1), default=EmbedParams.rounds, show_default=True)
@click.option("--ceiling", type=click.IntRange(min=1), default=None, help="Largest hardware size to try (default 16).")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("-o", "output", default=None, help="CSV output (default stdout).")
@click.option("--quiet", is_flag=True, help="No per-row progress on stderr.")
@input_errors
def experiment(problem, sizes, instances, encoding, target, tries, rounds, ceiling, seed, output, quiet):
    """Minimum embeddable hardware size per instance, as CSV."""
    spec = exp.ExperimentSpec(
        problem,
        _int_list(sizes),
        instances=instances,
        encodings=tuple(Encoding.parse(e) for e in _choices(encoding, ("dw", "onehot"))),
        targets=_choices(target, exp.TARGETS),
        seed=seed,
        tries=tries,
        rounds=rounds,
        ceiling=ceiling,
    )

    def progress(row):
        if not quiet:
            click.echo(",".join(row.cells()), err=True)

    _emit(exp.rows_to_csv(exp.run_experiment(spec, progress)), output)


@main.command()
@click.argument("csv_file", type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "output", default=None)
@input_errors
def summarize(csv_file, output):
    """Per-group min, max and mean of min_L and embedding ratio."""
    with open(csv_file) as f:
        text = f.read()
    _emit(exp.summary_to_csv(exp.summarize(text)), output)


if __name__ == "__main__":
    main()
