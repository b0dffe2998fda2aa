"""Command-line entry point: ``disjoint-spm <subcommand> [options]``.

Exit codes: 0 success, 1 unexpected error, 2 usage error, 3 feasibility
error, 4 verification failure.  Failures also print one JSON record to
stderr.  Big integers are written as decimal strings and rationals as
``p/q`` in every format.

CSV columns per subcommand::

    enumerate-graphs  mask,psi,classes,omega
    theta             k,classes,theta
    count             quantity,value
    verify            check,expected,observed,passed
    cliques           index,vertices
    sudoku-gen        row,values
"""
from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import os
import random
import sys
from dataclasses import asdict, dataclass

from . import __version__, formulas, graphs
from . import matrices as mx
from .errors import BoundsError, FeasibilityError, ValidationError, VerificationError

TOOL = "disjoint-spm"
JOBS_ENV = "DISJOINT_SPM_JOBS"
SIGMA_2 = 288
SIGMA_3 = 6_670_903_752_021_072_936_960

EXIT_OK, EXIT_ERROR, EXIT_USAGE, EXIT_FEASIBILITY, EXIT_VERIFY = 0, 1, 2, 3, 4


@dataclass
class RunConfig:
    subcommand: str
    n: int
    k: int | None = None
    seed: int | None = None
    jobs: int = 1
    output: str | None = None
    format: str = "json"
    allow_n5: bool = False
    allow_large: bool = False


class VerifyFailed(Exception):
    def __init__(self, failed: list[str]):
        super().__init__(f"failed checks: {', '.join(failed)}")
        self.failed = failed


def default_jobs() -> int:
    env = os.environ.get(JOBS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


# -- subcommands -------------------------------------------------------------
# Each returns (result dict, csv header, csv rows, text body).

def _enumerate_graphs(cfg: RunConfig):
    if cfg.k is None:
        raise BoundsError("enumerate-graphs needs --k")
    reps = graphs.enumerate_class_reps(cfg.n, cfg.k, cfg.allow_n5)
    rows = []
    for g in reps:
        rows.append({
            "mask": g.to_hex(),
            "psi": list(graphs.degree_profile(g).psi),
            "classes": list(graphs.neighborhood_classes(g).deltas),
            "omega": formulas.fraction_str(formulas.omega(g)),
        })
    buf = io.StringIO()
    graphs.write_class_file(buf, cfg.n, cfg.k, reps)
    result = {"n": cfg.n, "k": cfg.k, "count": len(reps), "graphs": rows}
    table = [[r["mask"], " ".join(map(str, r["psi"])), " ".join(map(str, r["classes"])), r["omega"]]
             for r in rows]
    return result, ["mask", "psi", "classes", "omega"], table, buf.getvalue()


def _theta(cfg: RunConfig):
    table = formulas.theta_table(cfg.n, cfg.jobs, cfg.allow_n5)
    counts = graphs.graph_count_table(cfg.n, cfg.allow_n5)
    rows = [{"k": k, "classes": counts[k], "theta": formulas.fraction_str(t)}
            for k, t in enumerate(table)]
    text = "".join(f"k={r['k']} classes={r['classes']} theta={r['theta']}\n" for r in rows)
    return ({"n": cfg.n, "theta": rows}, ["k", "classes", "theta"],
            [[r["k"], r["classes"], r["theta"]] for r in rows], text)


def _count(cfg: RunConfig):
    report = formulas.count_report(cfg.n, cfg.jobs, cfg.allow_n5).to_dict()
    pairs = [(key, report[key]) for key in ("n", "D", "d", "dual_path_ok", "orbit_D", "orbit_d")]
    text = "".join(f"{key}={value}\n" for key, value in pairs)
    text += "".join(f"theta[{r['k']}]={r['theta']} classes={r['classes']}\n" for r in report["theta"])
    return report, ["quantity", "value"], [[k, v] for k, v in pairs], text


def _fmt(value) -> str:
    if isinstance(value, list):
        return "[" + ", ".join(str(v) for v in value) + "]"
    return str(value)


def _check(name: str, expected, observed) -> dict:
    return {"check": name, "expected": _fmt(expected), "observed": _fmt(observed),
            "passed": expected == observed}


def verify_checks(n: int, jobs: int = 1, allow_n5: bool = False,
                  allow_large: bool = False) -> list[dict]:
    """Every formula-versus-formula and oracle-versus-formula equivalence for ``n``."""
    nn = n * n
    f = math.factorial(n)
    checks = []
    D_vertices = formulas.disjoint_ordered_by_vertices(n, allow_n5)
    D_theta = formulas.disjoint_ordered_by_theta(n, jobs, allow_n5)
    orbit_D = formulas.orbit_disjoint_ordered(n, allow_n5)
    checks.append(_check("dual_path_D", D_vertices, D_theta))
    checks.append(_check("D_even", 0, D_vertices % 2))
    q = [formulas.q_count(n, k, allow_n5) for k in range(nn + 1)]
    checks.append(_check("q0_is_pi_squared", formulas.s_perm_count(n) ** 2, q[0]))
    checks.append(_check("inclusion_exclusion_q",
                         D_vertices, sum((-1) ** k * v for k, v in enumerate(q))))
    twin_b = [formulas.b_rational(n, k, allow_n5) for k in range(nn + 1)]
    binom = [math.comb(nn, k) for k in range(nn + 1)]
    checks.append(_check("binomial_identity_twin_weight", binom, twin_b))
    orbit_b = [formulas.orbit_b_count(n, k, allow_n5) for k in range(nn + 1)]
    checks.append(_check("binomial_identity_orbit_weight", binom, orbit_b))
    checks.append(_check("orbit_D_even", 0, orbit_D % 2))
    if n <= 3:
        brute = mx.brute_force_disjoint_count(n, jobs)
        hist = mx.agreement_histogram(n, jobs)
        checks.append(_check("oracle_D_vs_formula", D_vertices, brute))
        checks.append(_check("oracle_D_vs_orbit_formula", orbit_D, brute))
        checks.append(_check("histogram_zero_is_oracle_D", brute, hist[0]))
        checks.append(_check("histogram_total", f ** (4 * n), sum(hist)))
        checks.append(_check("histogram_identical_pairs", f ** (2 * n), hist[nn]))
        oracle_q = [mx.q_oracle(hist, k) for k in range(nn + 1)]
        checks.append(_check("oracle_q_vs_formula", q, oracle_q))
        checks.append(_check("oracle_q_vs_orbit_formula",
                             [formulas.orbit_q_count(n, k, allow_n5) for k in range(nn + 1)],
                             oracle_q))
        checks.append(_check("bijection_roundtrip", True, _bijection_ok(n)))
    if n == 2 or (n == 3 and allow_large):
        graph = mx.build_disjointness_graph(n, allow_large)
        checks.append(_check("graph_edges_vs_d", D_vertices // 2, graph.edge_count()))
    if n == 2:
        cliques = list(mx.iter_cliques(graph, 4))
        checks.append(_check("z2_clique_count", 12, len(cliques)))
        checks.append(_check("z2_times_4!_is_sigma2", SIGMA_2, len(cliques) * 24))
        sudokus = set()
        for clique in cliques:
            family = [graph.vertex(v) for v in clique]
            for labels in itertools.permutations(range(1, 5)):
                sudokus.add(mx.compose_sudoku(family, labels).grid)
        checks.append(_check("composed_sudoku_count", SIGMA_2, len(sudokus)))
    if n == 3:
        checks.append(_check("z3_from_sigma3", 18_383_222_420_692_992,
                             formulas.z_from_sigma(SIGMA_3, 3)))
    return checks


def _bijection_ok(n: int) -> bool:
    if n <= 2:
        sample = mx.enumerate_pi(n)
    else:
        rng = random.Random(0)
        table = mx.symbol_table(n)
        sample = [mx.sperm_to_pi(mx.SPermutationMatrix.from_symbols(n, table[v]))
                  for v in rng.sample(range(len(table)), 10_000)]
    return all(mx.sperm_to_pi(mx.pi_to_sperm(p)) == p for p in sample)


def _verify(cfg: RunConfig):
    checks = verify_checks(cfg.n, cfg.jobs, cfg.allow_n5, cfg.allow_large)
    failed = [c["check"] for c in checks if not c["passed"]]
    result = {"n": cfg.n, "checks": checks, "all_passed": not failed}
    text = "".join(
        f"{'PASS' if c['passed'] else 'FAIL'} {c['check']}: expected {c['expected']}, "
        f"observed {c['observed']}\n" for c in checks
    )
    rows = [[c["check"], c["expected"], c["observed"], c["passed"]] for c in checks]
    return result, ["check", "expected", "observed", "passed"], rows, text


def _cliques(cfg: RunConfig):
    if cfg.n != 2:
        raise FeasibilityError(f"clique search is supported only for n=2, got n={cfg.n}")
    graph = mx.build_disjointness_graph(2)
    cliques = list(mx.iter_cliques(graph, 4))
    buf = io.StringIO()
    mx.write_clique_list(buf, cliques)
    z = len(cliques)
    result = {"n": 2, "z": z, "sudoku_count": z * math.factorial(4),
              "cliques": [list(c) for c in cliques]}
    rows = [[i, " ".join(map(str, c))] for i, c in enumerate(cliques)]
    return result, ["index", "vertices"], rows, buf.getvalue() + f"# z={z}\n"


def _sudoku_gen(cfg: RunConfig):
    if cfg.seed is None:
        raise BoundsError("sudoku-gen needs --seed")
    family = mx.sample_disjoint_family(cfg.n, cfg.seed)
    sudoku = mx.compose_sudoku(family)
    if not mx.validate_sudoku(sudoku.grid):
        raise VerificationError("composed grid failed validation")
    buf = io.StringIO()
    mx.write_family(buf, family)
    result = {"n": cfg.n, "seed": cfg.seed, "grid": [list(r) for r in sudoku.grid],
              "family": buf.getvalue().splitlines()[1:]}
    rows = [[i, " ".join(map(str, r))] for i, r in enumerate(sudoku.grid)]
    return result, ["row", "values"], rows, sudoku.to_text()


COMMANDS = {
    "enumerate-graphs": _enumerate_graphs,
    "theta": _theta,
    "count": _count,
    "verify": _verify,
    "cliques": _cliques,
    "sudoku-gen": _sudoku_gen,
}


def render(cfg: RunConfig, result: dict, header, rows, text: str) -> str:
    meta = {"tool": TOOL, "version": __version__, "config": asdict(cfg)}
    if cfg.format == "json":
        return json.dumps({**meta, "result": result}, indent=2, sort_keys=True) + "\n"
    comment = f"# {TOOL} {__version__} config={json.dumps(asdict(cfg), sort_keys=True)}\n"
    if cfg.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        return comment + buf.getvalue()
    return comment + text


def run(cfg: RunConfig) -> int:
    result, header, rows, text = COMMANDS[cfg.subcommand](cfg)
    out = render(cfg, result, header, rows, text)
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fp:
            fp.write(out)
    else:
        sys.stdout.write(out)
    if cfg.subcommand == "verify" and not result["all_passed"]:
        raise VerifyFailed([c["check"] for c in result["checks"] if not c["passed"]])
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, required=True, help="block side n (matrices are n^2 x n^2)")
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--output", "-o", help="write the report here instead of stdout")
    common.add_argument("--jobs", "-j", type=int, default=None,
                        help=f"worker threads (default: ${JOBS_ENV} or CPU count)")
    common.add_argument("--allow-n5", action="store_true", help="permit n=5 graph enumeration")
    common.add_argument("--allow-large", action="store_true",
                        help="permit building the n=3 disjointness graph (~272 MB)")

    parser = argparse.ArgumentParser(prog=TOOL, description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"{TOOL} {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    p = sub.add_parser("enumerate-graphs", parents=[common], help="graph classes with k edges")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--class-file", help="also write the graph-class file here")
    sub.add_parser("theta", parents=[common], help="per-k theta table")
    sub.add_parser("count", parents=[common], help="disjoint pair counts")
    sub.add_parser("verify", parents=[common], help="oracle and identity checks")
    p = sub.add_parser("cliques", parents=[common], help="n^2-cliques of the disjointness graph")
    p.add_argument("--clique-file", help="also write the clique list here")
    p = sub.add_parser("sudoku-gen", parents=[common], help="seeded random Sudoku matrix")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--family-file", help="also write the S-permutation family here")
    return parser


def _failure(kind: str, exc: BaseException, code: int) -> int:
    record = {"status": "error", "kind": kind, "message": str(exc), "exit_code": code}
    sys.stderr.write(json.dumps(record, sort_keys=True) + "\n")
    return code


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(
        subcommand=args.subcommand,
        n=args.n,
        k=getattr(args, "k", None),
        seed=getattr(args, "seed", None),
        jobs=args.jobs if args.jobs is not None else default_jobs(),
        output=args.output,
        format=args.format,
        allow_n5=args.allow_n5,
        allow_large=args.allow_large,
    )
    try:
        code = run(cfg)
        _write_side_files(args, cfg)
        return code
    except VerifyFailed as exc:
        return _failure("verification", exc, EXIT_VERIFY)
    except VerificationError as exc:
        return _failure("verification", exc, EXIT_VERIFY)
    except FeasibilityError as exc:
        return _failure("feasibility", exc, EXIT_FEASIBILITY)
    except (BoundsError, ValidationError) as exc:
        return _failure("usage", exc, EXIT_USAGE)
    except Exception as exc:  # noqa: BLE001 - last-resort record
        return _failure("internal", exc, EXIT_ERROR)


def _write_side_files(args, cfg: RunConfig) -> None:
    if getattr(args, "class_file", None):
        with open(args.class_file, "w", encoding="utf-8") as fp:
            graphs.write_class_file(fp, cfg.n, cfg.k, graphs.enumerate_class_reps(cfg.n, cfg.k, cfg.allow_n5))
    if getattr(args, "clique_file", None):
        with open(args.clique_file, "w", encoding="utf-8") as fp:
            mx.write_clique_list(fp, mx.iter_cliques(mx.build_disjointness_graph(2), 4))
    if getattr(args, "family_file", None):
        with open(args.family_file, "w", encoding="utf-8") as fp:
            mx.write_family(fp, mx.sample_disjoint_family(cfg.n, cfg.seed))


if __name__ == "__main__":
    sys.exit(main())
