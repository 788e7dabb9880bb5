"""Command-line driver.

    barrelwin --config configs/gr26.cfg --command collection --out out/ --emit-csv

Each command writes ``report.json`` (and any certificate or CSV) to the
output directory, or prints the report when no directory is given.  Exit
status is 0 when every check passes, 2 when a mathematical check fails or a
hypothesis is refused, and 1 for usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from math import prod
from pathlib import Path

from barrelwin import __version__
from barrelwin.collection import build_collection, verify_strong_exceptional
from barrelwin.config import JobConfig, load_config
from barrelwin.errors import (
    BarrelwinError,
    BudgetError,
    ConfigError,
    HypothesisError,
    ProofMismatchError,
    SearchExhaustedError,
    UnboundedWindowError,
)
from barrelwin.group import RepSpec, anticanonical
from barrelwin.lattice import Vec2, fmt_rational
from barrelwin.quiver import (
    DecoratedQuiver,
    QuiverVertex,
    compose_collections,
    lex_git_parameter,
    vertex_collection,
    vertex_multiplicity,
    vertex_rep,
    vertex_stability_checks,
)
from barrelwin.reduction import check_lattice_equality, reduce_fano, reduce_nef_fano
from barrelwin.stability import finite_stabilizer_test, gl2_fano_criterion
from barrelwin.toric import borisov_hua_window
from barrelwin.windows import (
    WindowRegion,
    check_generic,
    classify_points,
    find_boundary_generic_theta,
    find_generic_theta,
    make_window,
)

COMMANDS = ("analyze", "collection", "verify", "reduce", "compose", "toric")
EXIT_OK, EXIT_USAGE, EXIT_FAILED = 0, 1, 2
DEFAULT_T_GRID = [Fraction(1, 2 ** k) for k in range(1, 13)]


def jsonable(obj):
    """Exact values as strings; containers recursively; key order preserved."""
    if isinstance(obj, Vec2):
        return obj.to_str()
    if isinstance(obj, Fraction):
        return fmt_rational(obj)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(x) for x in obj]
    return obj


class Job:
    """Shared setup for a configured representation and its window."""

    def __init__(self, cfg: JobConfig, degree_budget: int | None, seed_box: int | None):
        self.cfg = cfg
        self.degree_budget = degree_budget if degree_budget is not None else cfg.degree_budget
        self.seed_box = seed_box if seed_box is not None else cfg.seed_box
        self.csv_rows: list[dict] | None = None
        self.extra_files: dict[str, str] = {}

    def rep(self) -> RepSpec:
        return self.cfg.rep()

    def region(self, require_finite: bool = True) -> WindowRegion:
        rep = self.rep()
        ell = self.cfg.polarization(rep)
        base = make_window(rep, ell, self.cfg.lambda0, lambda_prime=self.cfg.lambda_prime)
        if require_finite:
            verdict = finite_stabilizer_test(rep, ell, base.lambda0)
            if not verdict.finite_stabilizers:
                raise HypothesisError(
                    verdict.reason, f"semistable points have positive-dimensional stabilizers ({verdict.offending_weight})"
                )
        if self.cfg.theta is not None:
            theta = self.cfg.theta
        elif self.cfg.is_perturbed:
            theta = find_boundary_generic_theta(rep, ell, base.lambda0)
        else:
            theta = find_generic_theta(rep, ell, base.lambda0)
        return base.with_theta(theta)

    def header(self, command: str) -> dict:
        return {"command": command, "config": self.cfg.name, "version": __version__}


def _destab_table(region: WindowRegion) -> list[dict]:
    names = ("lambda0", "+lambda_prime", "-lambda_prime")
    return [
        {"name": n, "lambda": d.lam, "zeta": d.zeta, "eta": d.eta}
        for n, d in zip(names, (region.d0, region.dplus, region.dminus))
    ]


def _window_block(region: WindowRegion) -> dict:
    return {
        "omega_star": anticanonical(region.rep),
        "lambda0": region.lambda0,
        "lambda_prime": region.lambda_prime,
        "polarization": repr(region.ell),
        "theta": region.theta,
    }


def _theta_checks(job: Job, region: WindowRegion) -> dict:
    if job.cfg.is_perturbed:
        return {"theta_avoids_boundary": not region.boundary_lattice_points()}
    return {"theta_generic": check_generic(region).is_generic}


def cmd_analyze(job: Job) -> dict:
    rep = job.rep()
    report = job.header("analyze")
    report["representation"] = {"group": rep.group.kind, "weights": list(rep.weights)}
    checks: dict[str, bool] = {}
    if rep.gl2_summands is not None:
        ok, rows = gl2_fano_criterion(rep)
        report["gl2_summands"] = [
            {"n": s.n, "m": s.m, "negative_against_lambda0": s.negative_against_lambda0, "odd": s.odd}
            for s in rows
        ]
        checks["gl2_fano_criterion"] = ok
        if not ok:
            bad = next(s for s in rows if not (s.odd and s.negative_against_lambda0))
            anchor = "gl2-summand-odd" if not bad.odd else "gl2-summand-positive"
            raise HypothesisError(anchor, f"summand Sym^{bad.n} x det^{bad.m} violates the GL2 criterion")
    region = job.region(require_finite=False)
    report["window"] = _window_block(region)
    report["destabilizing_data"] = _destab_table(region)
    verdict = finite_stabilizer_test(rep, region.ell, region.lambda0)
    report["stability"] = {
        "finite_stabilizers": verdict.finite_stabilizers,
        "offending_weight": verdict.offending_weight,
        "reason": verdict.reason,
    }
    checks["finite_stabilizers"] = verdict.finite_stabilizers
    gen = check_generic(region)
    report["genericity"] = {
        "is_generic": gen.is_generic,
        "witness": gen.witness,
        "hyperplane": gen.hyperplane,
    }
    checks.update(_theta_checks(job, region))
    if not job.cfg.is_perturbed:
        grid = job.cfg.t_grid or DEFAULT_T_GRID
        barrel = set(region.lattice_points(region.in_barrel))
        rows = []
        for t in grid:
            pts = set(region.lattice_points(lambda c, t=t: region.in_perturbed(c, t)))
            rows.append({"t": t, "count": len(pts), "equals_barrel": pts == barrel})
        report["narrowing"] = {"barrel_count": len(barrel), "grid": rows}
        checks["narrowing_stabilizes"] = bool(rows) and rows[-1]["equals_barrel"]
    job.csv_rows = classify_points(region)
    report["checks"] = checks
    return report


def cmd_collection(job: Job) -> dict:
    region = job.region()
    report = job.header("collection")
    report["window"] = _window_block(region)
    entries = build_collection(region)
    report["count"] = len(entries)
    report["labels"] = [
        {"index": e.order_index, "label": e.label, "lambda0_weight": e.lambda0_weight} for e in entries
    ]
    job.csv_rows = classify_points(region)
    report["checks"] = {**_theta_checks(job, region), "nonempty": bool(entries)}
    return report


def cmd_verify(job: Job) -> dict:
    region = job.region()
    report = job.header("verify")
    report["window"] = _window_block(region)
    labels = [e.label for e in build_collection(region)]
    result = verify_strong_exceptional(region, labels, degree_budget=job.degree_budget)
    report["labels"] = labels
    report["degree_budget"] = job.degree_budget
    report["pairs_checked"] = len(result.pairs)
    report["partial"] = result.partial
    report["failing_pairs"] = [
        {"i": p.i, "j": p.j, "failing_weight": p.failing_weight, "hom_dims": p.hom_dims}
        for p in result.failing_pairs
    ]
    report["matrix"] = result.matrix()
    report["checks"] = {"strong_exceptional": result.passes}
    return report


def cmd_reduce(job: Job) -> dict:
    region = job.region()
    report = job.header("reduce")
    report["window"] = _window_block(region)
    checks: dict[str, bool] = {}
    if job.cfg.is_perturbed:
        cert = reduce_nef_fano(region, seed_box=job.seed_box, strict=False)
        checks["lattice_equality"] = check_lattice_equality(region)
    else:
        cert = reduce_fano(region, seed_box=job.seed_box, strict=False)
    report["engine"] = cert.engine
    report["parameters"] = cert.parameters
    report["seed_box"] = job.seed_box
    report["seeds"] = len(cert.seeds)
    report["nodes"] = len(cert.nodes)
    report["edges"] = cert.edges
    report["leaves"] = len(cert.leaves)
    report["rule_counts"] = cert.rule_counts()
    report["mismatches"] = cert.mismatches
    checks["zero_mismatches"] = not cert.mismatches
    checks["leaves_in_window"] = all(cert.nodes[c].in_window for c in cert.leaves)
    report["checks"] = checks
    job.extra_files["certificate.json"] = json.dumps(jsonable(cert.to_dict()), indent=2) + "\n"
    job.csv_rows = [
        {
            "a": int(n.chi.a),
            "b": int(n.chi.b),
            "rule": n.rule or "leaf",
            "children": " ".join(c.to_str() for c in n.children),
        }
        for n in cert.nodes.values()
    ]
    return report


def build_quiver(cfg: JobConfig) -> DecoratedQuiver:
    qc = cfg.quiver
    if qc is None:
        raise ConfigError("the compose command needs quiver_ranks", field="quiver_ranks")
    vertices = [
        QuiverVertex(rank, w, dp, src, qc.trusted.get(i))
        for i, (rank, w, dp, src) in enumerate(zip(qc.ranks, qc.framings, qc.det_powers, qc.collections))
    ]
    return DecoratedQuiver(vertices, list(qc.arrows))


def cmd_compose(job: Job) -> dict:
    q = build_quiver(job.cfg)
    report = job.header("compose")
    stability = vertex_stability_checks(q)
    cols, verified = [], []
    for i, v in enumerate(q.vertices):
        col = vertex_collection(q, i)
        cols.append(col)
        if v.collection_source == "auto":
            rep = vertex_rep(q, i)
            region = make_window(rep, ell=v.ell, theta=find_generic_theta(rep, v.ell))
            res = verify_strong_exceptional(region, col, degree_budget=job.degree_budget)
            verified.append({"vertex": i, "source": "auto", "verified": res.passes})
        else:
            verified.append({"vertex": i, "source": "trusted", "verified": None})
    pc = compose_collections(q, cols)
    report["vertices"] = [
        {
            "index": i,
            "rank": v.rank,
            "framing": v.framing,
            "multiplicity": vertex_multiplicity(q, i),
            "det_power": v.det_power,
            "collection_size": len(cols[i]),
        }
        for i, v in enumerate(q.vertices)
    ]
    report["arrows"] = [list(a) for a in q.arrows]
    report["git_parameter"] = list(lex_git_parameter(q).ells)
    report["stability"] = stability
    report["collections"] = verified
    report["count"] = len(pc)
    report["entries"] = [
        {"index": list(e), "labels": list(lab)} for e, lab in zip(pc.entries, pc.labels())
    ]
    report["checks"] = {
        "size_is_product": len(pc) == prod(len(c) for c in cols),
        "vertex_finite_stabilizers": all(s["finite_stabilizers"] is not False for s in stability),
        "collections_verified": all(c["verified"] is not False for c in verified),
    }
    job.csv_rows = [
        {"position": k, **{f"j{i + 1}": j for i, j in enumerate(e)}} for k, e in enumerate(pc.entries)
    ]
    return report


def cmd_toric(job: Job) -> dict:
    region = job.region()
    report = job.header("toric")
    report["window"] = _window_block(region)
    bh = borisov_hua_window(region)
    g = bh.gale
    report["gale_dual"] = {
        "phi": g.phi,
        "A_free_rank": g.A_free_rank,
        "torsion": g.torsion,
        "ray_generators": [{"free": list(v.free), "torsion": list(v.torsion)} for v in g.ray_generators],
        "rho": g.rho,
        "picard_rank_two": "assumed",
    }
    report["borisov_hua"] = {
        "a": bh.a,
        "r": bh.r,
        "I_plus": bh.I_plus,
        "eta0": bh.eta0,
        "eta_lambda_prime": bh.eta_lambda_prime,
    }
    invariants = bh.invariants()
    report["invariants"] = invariants
    R = job.cfg.scan_box or 2
    unshifted = region.with_theta(Vec2(0, 0))
    bh0 = borisov_hua_window(unshifted)
    box = list(unshifted.box_points(R))
    mism = [c for c in box if bh0.contains(c) != unshifted.in_cylinder(c)]
    shifted_box = list(region.box_points(R))
    shift_mism = [c for c in shifted_box if bh.contains(c) != region.in_cylinder(c)]
    cyl = {c for c in shifted_box if region.in_cylinder(c)}
    bar = {c for c in shifted_box if region.in_barrel(c)}
    report["region_equality"] = {
        "scan_box": R,
        "points": len(box),
        "mismatches": mism,
        "equal": not mism,
        "shifted_points": len(shifted_box),
        "shifted_mismatches": shift_mism,
        "shifted_equal": not shift_mism,
        "shifted_cylinder_equals_barrel": cyl == bar,
    }
    report["checks"] = {
        "exactness": g.exactness_holds(),
        **{f"invariant_{k}": v for k, v in invariants.items()},
        "region_equality": not mism,
        "shifted_region_equality": not shift_mism,
    }
    rows = []
    for c in shifted_box:
        rows.append(
            {
                "a": int(c.a),
                "b": int(c.b),
                "in_cylinder": region.in_cylinder(c),
                "in_borisov_hua": bh.contains(c),
                "in_barrel": region.in_barrel(c),
            }
        )
    job.csv_rows = rows
    return report


HANDLERS = {
    "analyze": cmd_analyze,
    "collection": cmd_collection,
    "verify": cmd_verify,
    "reduce": cmd_reduce,
    "compose": cmd_compose,
    "toric": cmd_toric,
}


def csv_text(rows: list[dict]) -> str:
    buf = io.StringIO()
    if rows:
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        for r in rows:
            writer.writerow({k: (str(v).lower() if isinstance(v, bool) else v) for k, v in r.items()})
    return buf.getvalue()


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def make_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="barrelwin", description="Window collections for rank-two GIT quotients.")
    p.add_argument("--config", required=True, metavar="PATH")
    p.add_argument("--command", required=True, choices=COMMANDS, metavar="NAME")
    p.add_argument("--out", metavar="DIR")
    p.add_argument("--degree-budget", type=int, metavar="N")
    p.add_argument("--seed-box", type=int, metavar="K")
    p.add_argument("--emit-csv", action="store_true")
    return p


def run(argv=None) -> tuple[int, dict | None]:
    args = make_parser().parse_args(argv)
    if args.degree_budget is not None and args.degree_budget < 0:
        print("barrelwin: error: --degree-budget must be nonnegative", file=sys.stderr)
        return EXIT_USAGE, None
    if args.seed_box is not None and args.seed_box < 1:
        print("barrelwin: error: --seed-box must be positive", file=sys.stderr)
        return EXIT_USAGE, None
    try:
        cfg = load_config(args.config)
    except ConfigError as e:
        print(f"barrelwin: config error: {e}", file=sys.stderr)
        return EXIT_USAGE, None
    job = Job(cfg, args.degree_budget, args.seed_box)
    try:
        report = HANDLERS[args.command](job)
        status = EXIT_OK if all(report["checks"].values()) else EXIT_FAILED
        report["status"] = "ok" if status == EXIT_OK else "failed"
    except ConfigError as e:
        print(f"barrelwin: config error: {e}", file=sys.stderr)
        return EXIT_USAGE, None
    except HypothesisError as e:
        report = job.header(args.command)
        report["status"] = "refused"
        report["refusal"] = {"hypothesis": e.anchor, "message": e.detail}
        status = EXIT_FAILED
    except (ProofMismatchError, BudgetError, SearchExhaustedError, UnboundedWindowError) as e:
        report = job.header(args.command)
        report["status"] = "failed"
        report["error"] = {"kind": type(e).__name__, "message": str(e)}
        status = EXIT_FAILED
    except BarrelwinError as e:
        print(f"barrelwin: error: {e}", file=sys.stderr)
        return EXIT_USAGE, None

    text = json.dumps(jsonable(report), indent=2) + "\n"
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(text)
        for name, body in job.extra_files.items():
            (out / name).write_text(body)
        if args.emit_csv and job.csv_rows is not None:
            (out / f"{args.command}.csv").write_text(csv_text(job.csv_rows))
        print(f"{args.command} {cfg.name}: {report['status']}")
    else:
        sys.stdout.write(text)
        if args.emit_csv and job.csv_rows is not None:
            sys.stdout.write(csv_text(job.csv_rows))
    return status, report


def main(argv=None) -> int:
    status, _ = run(argv)
    return status


if __name__ == "__main__":
    sys.exit(main())
