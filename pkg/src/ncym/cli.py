"""Batch front-end: `ncym run`, `ncym validate`, `ncym constants`.

One experiment per invocation; reports are JSON documents with a fixed key
order so identical configs and seeds produce byte-identical payloads apart
from the wall-clock field.  Exit codes: 0 success, 1 input error, 2 at least
one check verdict false.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time

import numpy as np

from . import __version__, config as cfg, finite, sampling, torus, yangmills as ym
from .errors import ComputeError, ConfigInvalid, NcymError

log = logging.getLogger("ncym")

CONVENTIONS = {
    "monomial_order": torus.MONOMIAL_ORDER,
    "cocycle": torus.COCYCLE_CONVENTION,
    "canonical_eps": torus.CANONICAL_EPS,
}


def _build_connection(theta, q, block, proj=None):
    if "A" in block:
        a = [ym.TorusMatrix.from_payload(theta, m) for m in block["A"]]
        return ym.Connection(theta, q, a, proj)
    r = block["random"]
    gen = sampling.rng(int(r["seed"]))
    return ym.random_connection(
        theta,
        q,
        gen,
        radius=int(r.get("radius", 2)),
        terms=int(r.get("terms", 4)),
        amplitude=float(r.get("amplitude", 0.1)),
        proj=proj,
    )


def _resolve_triple(ref) -> finite.FiniteTriple:
    if "trivial" in ref:
        return finite.trivial_triple()
    if "case" in ref:
        case = ref["case"]
        p, q = int(case["p"]), int(case["q"])
        mu = np.array([complex(re, im) for re, im in case["mu"]]).reshape(p, q)
        return finite.matrix_case_triple(p, q, mu)
    if "payload" in ref:
        return finite.FiniteTriple.from_payload(ref["payload"])
    with open(ref["path"], "r") as fh:
        return finite.FiniteTriple.from_payload(json.load(fh))


def _run_torus_ym(payload):
    theta = torus.ThetaMatrix.from_payload(payload["theta"])
    q = int(payload["q"])
    proj = None
    if payload.get("proj") is not None:
        proj = ym.Projection(ym.TorusMatrix.from_payload(theta, payload["proj"]))
    c = _build_connection(theta, q, payload["connection"], proj)
    samples = int(payload.get("samples", 100))
    seed = int(payload.get("seed", 0))
    tols = payload.get("tolerances", {})
    compat_tol = float(tols.get("compat", ym.COMPAT_TOL))
    deviation = ym.compatibility_deviation(c, samples, seed)
    results = {
        "ym": ym.ym_value(c),
        "gradient_norm": ym.gradient_norm(c),
        "compatibility_deviation": deviation,
    }
    if proj is not None:
        results["projection_idempotency_defect"] = proj.idempotency_defect()
    checks = {"compatible": deviation <= compat_tol}
    return results, checks, {"compat": compat_tol}


def _run_torus_minimize(payload):
    theta = torus.ThetaMatrix.from_payload(payload["theta"])
    q = int(payload["q"])
    proj = None
    if payload.get("proj") is not None:
        proj = ym.Projection(ym.TorusMatrix.from_payload(theta, payload["proj"]))
    c0 = _build_connection(theta, q, payload["connection"], proj)
    max_iters = int(payload.get("max_iters", 10000))
    grad_tol = float(payload.get("grad_tol", 1e-8))
    c, trace = ym.minimize(
        c0,
        max_iters=max_iters,
        grad_tol=grad_tol,
        armijo=float(payload.get("armijo", 1e-4)),
        shrink=float(payload.get("shrink", 0.5)),
        initial_step=float(payload.get("initial_step", 1.0)),
        precondition=bool(payload.get("precondition", True)),
    )
    results = {
        "initial_ym": trace[0],
        "terminal_ym": trace[-1],
        "iterations": len(trace) - 1,
        "terminal_gradient_norm": ym.gradient_norm(c),
        "trace": trace,
    }
    checks = {
        "converged": results["terminal_gradient_norm"] <= grad_tol,
        "monotone_trace": all(b <= a for a, b in zip(trace, trace[1:])),
    }
    return results, checks, {"grad_tol": grad_tol}


def _run_torus_product(payload):
    theta = torus.ThetaMatrix.from_payload(payload["theta"])
    phi = torus.ThetaMatrix.from_payload(payload["phi"])
    c1 = _build_connection(theta, int(payload["q1"]), payload["connection1"])
    c2 = _build_connection(phi, int(payload["q2"]), payload["connection2"])
    samples = int(payload.get("samples", 20))
    seed = int(payload.get("seed", 0))
    tol = float(payload.get("tol", 1e-8))
    rep = ym.additivity_report(c1, c2)
    split = ym.critical_splitting_check(c1, c2, samples, seed, tol)
    results = dict(rep.to_payload())
    results["splitting"] = {
        "necessary": split.necessary,
        "product_critical": split.product_critical,
    }
    checks = {
        "subadditive": ym.subadditivity_check(c1, c2),
        "splitting_implication": (not split.product_critical) or split.necessary,
    }
    return results, checks, {"tol": tol}


def _run_finite_forms(payload):
    if "case" in payload:
        case = payload["case"]
        p, q = int(case["p"]), int(case["q"])
        mu = np.array([complex(re, im) for re, im in case["mu"]]).reshape(p, q)
        triple = finite.matrix_case_triple(p, q, mu)
        case_tag = finite.classify_matrix_case(p, q, mu).value
    else:
        triple = _resolve_triple(payload["triple"])
        case_tag = None
    rep = finite.form_report(triple)
    results = rep.to_payload()
    if case_tag is not None:
        results["case"] = case_tag
    checks = {"quotient_consistent": rep.dim_omega2 == rep.dim_pi_omega2 - rep.dim_junk}
    return results, checks, {"rank_tol": finite.RANK_TOL}


def _run_finite_product(payload):
    t1 = _resolve_triple(payload["t1"])
    t2 = _resolve_triple(payload["t2"])
    if t1.gamma is None and payload.get("auto_double", True):
        t1 = finite.double_odd(t1)
    samples = int(payload.get("samples", 100))
    seed = int(payload["seed"])
    dec = finite.decomposition_check(t1, t2)
    hyp = finite.hypothesis_check(t1, t2)
    orth = finite.orthogonality_check(t1, t2, samples, seed)
    results = {"decomposition_dims": dec.dims, "hypothesis_dims": hyp.dims}
    if t1.gamma is not None and t2.gamma is not None:
        results["unitary_equivalence_defect"] = finite.unitary_equivalence_defect(t1, t2)
    checks = {
        "omega1_ok": dec.omega1_ok,
        "numerator_ok": dec.numerator_ok,
        "denominator_ok": dec.denominator_ok,
        "intersection_zero": dec.intersection_zero,
        "hypothesis_holds": hyp.holds,
        "orthogonality": orth,
    }
    return results, checks, {"rank_tol": finite.RANK_TOL, "contain_tol": finite.CONTAIN_TOL}


def _run_constants(payload):
    n = int(payload["n"])
    results = {"n": n, "dixmier": ym.dixmier_torus_constant(n)}
    gamma = payload.get("gamma")
    if gamma is not None:
        alpha, beta = ym.gamma_constants(
            float(gamma["k"]),
            float(gamma["l"]),
            int(gamma["m"]),
            int(gamma["n"]),
            float(gamma["tr_d1"]),
            float(gamma["tr_d2"]),
        )
        results["alpha"] = alpha
        results["beta"] = beta
    return results, {}, {}


_RUNNERS = {
    "torus_ym": _run_torus_ym,
    "torus_minimize": _run_torus_minimize,
    "torus_product": _run_torus_product,
    "finite_forms": _run_finite_forms,
    "finite_product": _run_finite_product,
    "constants": _run_constants,
}


def run(experiment: cfg.ExperimentConfig) -> dict:
    """Execute one experiment and return its report document."""
    start = time.monotonic()
    try:
        results, checks, tolerances = _RUNNERS[experiment.kind](experiment.payload)
    except NcymError:
        raise
    except (OSError, ValueError, KeyError) as exc:
        raise ComputeError(f"{type(exc).__name__}: {exc}") from exc
    return {
        "schema_version": cfg.SCHEMA_VERSION,
        "library_version": __version__,
        "kind": experiment.kind,
        "config": {"kind": experiment.kind, "payload": experiment.payload},
        "conventions": CONVENTIONS,
        "tolerances": tolerances,
        "results": results,
        "checks": checks,
        "wall_clock_seconds": time.monotonic() - start,
    }


def _emit(report: dict, output_path: str | None) -> None:
    text = json.dumps(report, sort_keys=True, indent=2)
    if output_path:
        with open(output_path, "w") as fh:
            fh.write(text + "\n")
        log.info("report written to %s", output_path)
    else:
        print(text)


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("NCYM_LOG", "WARNING").upper())
    parser = argparse.ArgumentParser(prog="ncym", description="noncommutative Yang-Mills workbench")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one experiment config")
    p_run.add_argument("config", help="path to the JSON config")
    p_run.add_argument("--output", default=None, help="report path (overrides config output_path)")
    p_run.add_argument("--seed", type=int, default=None, help="override payload seed")

    p_val = sub.add_parser("validate", help="validate a config, print diagnostics")
    p_val.add_argument("config", help="path to the JSON config")

    p_const = sub.add_parser("constants", help="closed-form torus constants")
    p_const.add_argument("--n", type=int, required=True, help="torus dimension")

    args = parser.parse_args(argv)

    if args.command == "constants":
        try:
            report = run(cfg.ExperimentConfig("constants", {"n": args.n}))
        except NcymError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        _emit(report, None)
        return 0

    try:
        with open(args.config, "r") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 1

    if args.command == "validate":
        diags = cfg.validate(text)
        for d in diags:
            print(f"{d.severity}: {d.path}: {d.message}")
        return 0 if not diags else 1

    try:
        experiment = cfg.parse(text)
    except ConfigInvalid as exc:
        for d in exc.diagnostics:
            print(f"error: {d.path}: {d.message}", file=sys.stderr)
        return 1

    if args.seed is not None:
        experiment.payload["seed"] = args.seed
    output = args.output or experiment.output_path

    try:
        report = run(experiment)
    except ConfigInvalid as exc:
        for d in exc.diagnostics:
            print(f"error: {d.path}: {d.message}", file=sys.stderr)
        return 1
    except NcymError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    _emit(report, output)
    if any(v is False for v in report["checks"].values()):
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
