"""Command-line interface: ``orfq <subcommand> [options]``.

Exit codes: 0 success, 1 failed invariant, 2 invalid input, 3 numerical
breakdown, 4 mismatch between two computational routes.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from dataclasses import dataclass, field

import numpy as np

from . import ampd, eig, matfac, orf, porf, verify
from .errors import NumericalError, ShapeMismatch, SpecError
from .extc import is_inf, turns_to_unimodular
from .measure import angle, lebesgue
from .serialize import complex_from_json, dumps, load_json, load_measure, load_sequence, ratfun_to_json

EXIT_OK, EXIT_INVARIANT, EXIT_SPEC, EXIT_NUMERICAL, EXIT_MISMATCH = 0, 1, 2, 3, 4
ROUTE_TOL = 1e-6


@dataclass
class RunConfig:
    command: str
    poles: str | None = None
    measure: str | None = None
    n: int = 4
    tau_turns: float = 0.0
    kind: str = "G"
    route: str = "numerator"
    fmt: str = "json"
    out: str | None = None
    seed: int = 0
    tol: float | None = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 1:
            raise SpecError("--n must be at least 1")
        if self.tol is not None and not self.tol > 0:
            raise SpecError("--tol must be positive")

    @property
    def tau(self) -> complex:
        return turns_to_unimodular(self.tau_turns)


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out:
        with open(cfg.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _csv(rows, header) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in r])
    return buf.getvalue()


def _cstr(z) -> str:
    z = complex(z)
    return f"{z.real!r}{z.imag:+}j"


def _inputs(cfg: RunConfig, need: int):
    if not cfg.poles:
        raise SpecError("--poles is required")
    seq = load_sequence(cfg.poles)
    if seq.N < need:
        raise SpecError(f"pole file has {seq.N} poles but {need} are needed")
    mu = load_measure(cfg.measure) if cfg.measure else lebesgue()
    return seq, mu


def _lam_json(lam):
    return "inf" if is_inf(lam) else lam


# ---------------------------------------------------------------- subcommands


def cmd_orf(cfg: RunConfig) -> int:
    seq, mu = _inputs(cfg, cfg.n)
    sys_ = orf.build_system(mu, seq, cfg.n, cfg.kind)
    rows = []
    for k in range(cfg.n + 1):
        row = {"degree": k, "side": seq.side_of(k), "phi": ratfun_to_json(sys_.phis[k])}
        if k >= 1:
            row.update(**{"lambda": _lam_json(sys_.lambdas[k - 1]), "e": sys_.es[k - 1],
                          "eta1": sys_.etas1[k - 1]})
        rows.append(row)
    if cfg.fmt == "csv":
        out = []
        for r in rows:
            lam = r.get("lambda", 0j)
            li = ("inf", "inf") if lam == "inf" else (complex(lam).real, complex(lam).imag)
            eta = complex(r.get("eta1", 1.0))
            num = ";".join(_cstr(c) for c in sys_.phis[r["degree"]].num)
            out.append([r["degree"], r["side"], *li, float(r.get("e", 1.0)), eta.real, eta.imag, num])
        _emit(cfg, _csv(out, ["degree", "side", "lambda_re", "lambda_im", "e", "eta1_re", "eta1_im", "numerator"]))
    else:
        payload = {"kind": cfg.kind, "n": cfg.n, "orthonormality_error": orf.orthonormality_error(sys_),
                   "rows": rows}
        if cfg.extra.get("emit_params"):
            payload["params"] = {"lambdas": [_lam_json(l) for l in sys_.lambdas],
                                 "es": list(sys_.es), "etas1": list(sys_.etas1)}
        _emit(cfg, dumps(payload))
    return EXIT_OK


def _spectral(seq, sys_, n, tau):
    if n < 2:
        raise SpecError("the spectral route needs at least two nodes")
    sn = matfac.snake_product(seq, sys_.alpha_system, n - 1, "phi")
    return matfac.spectral_quadrature(sn, seq, n - 1, tau)


def cmd_quad(cfg: RunConfig) -> int:
    n = cfg.n
    route = cfg.route
    seq, mu = _inputs(cfg, n)
    sys_ = orf.build_system(mu, seq, n, "G")
    report = {}
    if route == "numerator":
        q = porf.quadrature(sys_, n, cfg.tau)
    elif route == "spectral":
        q = _spectral(seq, sys_, n, cfg.tau)
    elif route == "both":
        qs = _spectral(seq, sys_, n, cfg.tau)
        xi = qs.nodes[0]
        taup = -complex(sys_.phis[n](xi)) / complex(sys_.phistars[n](xi))
        q = porf.quadrature(sys_, n, taup / abs(taup))
        w2 = porf.weights_second_kind(sys_, q)
        dn, dw = porf.compare_quadratures(q, qs)
        dw2 = float(np.max(np.abs(w2 - q.weights)))
        report = {"matched_tau_turns": float(angle(taup) / (2 * np.pi)), "node_dev": dn,
                  "weight_dev": max(dw, dw2)}
    else:
        raise SpecError(f"unknown route {route!r}")
    rows = [[i, z.real, z.imag, float(angle(z)), float(w)] for i, (z, w) in enumerate(zip(q.nodes, q.weights))]
    wsum = float(np.sum(q.weights))
    if cfg.fmt == "csv":
        text = _csv(rows, ["index", "node_re", "node_im", "node_arg", "weight"])
        text += f"# weight_sum,{wsum!r}\n"
        for k, v in report.items():
            text += f"# {k},{v!r}\n"
        _emit(cfg, text)
    else:
        _emit(cfg, dumps({"n": n, "tau": q.tau, "route": route, "weight_sum": wsum,
                          "nodes": q.nodes, "weights": q.weights, **report}))
    tol = cfg.tol or ROUTE_TOL
    if report and max(report["node_dev"], report["weight_dev"]) > tol:
        print(f"route mismatch: nodes {report['node_dev']:.3e}, weights {report['weight_dev']:.3e}",
              file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_matrix(cfg: RunConfig) -> int:
    n = cfg.n
    seq, mu = _inputs(cfg, n + 1)
    alpha_sys = orf.build_system(mu, seq, n + 1, "A")
    sn = matfac.snake_product(seq, alpha_sys, n, cfg.extra.get("basis", "phi"))
    emit = cfg.extra.get("emit", "factors")
    if emit == "factors":
        payload = {"shape": sn.shape, "order": list(sn.order), "size": sn.size,
                   "factors": [{"k": f.k, "block": f.block} for f in sn.factors]}
        _emit(cfg, dumps(payload))
    elif emit == "dense":
        M = matfac.truncations(sn, n, "unitary", cfg.tau)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        for row in M:
            w.writerow([_cstr(z) for z in row])
        _emit(cfg, buf.getvalue())
    elif emit == "pattern":
        _emit(cfg, matfac.pattern_ascii(sn.dense()) + "\n")
    else:
        raise SpecError(f"unknown --emit value {emit!r}")
    return EXIT_OK


def cmd_ampd(cfg: RunConfig) -> int:
    rng = np.random.default_rng(cfg.seed)
    k = cfg.n
    tol = cfg.tol or 1e-8
    samples = cfg.extra.get("samples")
    if samples:
        orders = ampd.sample_orderings(k, int(samples), rng)
    else:
        orders = ampd.distinct_orderings(k)
    if cfg.extra.get("unitary"):
        alphas = verify.random_alphas(rng, k + 1)
        rep = ampd.unitary_rampd_report(alphas, ampd.random_deltas(rng, k), orders)
        payload = {"n": k, "seed": cfg.seed, "unitary": True, "orderings": rep["orderings"],
                   "max_eigenvalue_dev": rep["lambda_dev"], "max_absV_dev": rep["absV_dev"]}
        dev = max(rep["lambda_dev"], rep["absV_dev"])
    else:
        fs = ampd.random_factors(rng, k)
        A, B, C, D = (ampd.random_diag(rng, k + 1) for _ in range(4))
        dets, ddev = ampd.det_invariance(A, fs, D, orders)
        tdets, tdev = ampd.det_invariance(A, fs, D, orders, truncate=True)
        eigs, edev = ampd.rampd_invariance(A, B, C, D, fs, orders)
        payload = {"n": k, "seed": cfg.seed, "unitary": False,
                   "orderings": [{"ordering": list(p), "det": d, "det_truncated": t, "rampd_eigenvalues": e}
                                 for p, d, t, e in zip(orders, dets, tdets, eigs)],
                   "max_det_dev": ddev, "max_truncated_det_dev": tdev, "max_eigenvalue_dev": edev}
        dev = max(ddev, tdev, edev)
    payload["passed"] = bool(dev <= tol)
    _emit(cfg, dumps(payload))
    return EXIT_OK if dev <= tol else EXIT_INVARIANT


def cmd_verify(cfg: RunConfig) -> int:
    results = verify.run_suite(cfg.seed, perturb=cfg.extra.get("perturb", False))
    summ = verify.summary(results)
    if cfg.extra.get("json") or cfg.fmt == "json":
        _emit(cfg, dumps(summ))
    else:
        lines = [f"{'PASS' if r.passed else 'FAIL'}  {r.name:32s} {r.value:.3e} (tol {r.tol:.0e})" for r in results]
        _emit(cfg, "\n".join(lines) + "\n")
    return EXIT_OK if summ["passed"] else EXIT_INVARIANT


def cmd_roots(cfg: RunConfig) -> int:
    raw = cfg.extra.get("coeffs")
    if raw is None:
        raise SpecError("--coeffs is required (JSON list or file, ascending order)")
    try:
        import json

        data = json.loads(raw)
    except ValueError:
        data = load_json(raw)
    if isinstance(data, dict):
        data = data.get("coeffs")
    if not isinstance(data, list):
        raise SpecError("coefficients must be a JSON list")
    coeffs = np.array([complex_from_json(c) for c in data], dtype=complex)
    r = eig.poly_roots(coeffs)
    resid = float(np.max(np.abs(np.polynomial.polynomial.polyval(r, coeffs)))) / max(np.linalg.norm(coeffs), 1e-300)
    if cfg.fmt == "csv":
        _emit(cfg, _csv([[i, z.real, z.imag, abs(z)] for i, z in enumerate(r)], ["index", "re", "im", "abs"]))
    else:
        _emit(cfg, dumps({"roots": r, "relative_residual": resid}))
    return EXIT_OK


COMMANDS = {"orf": cmd_orf, "quad": cmd_quad, "matrix": cmd_matrix, "ampd": cmd_ampd,
            "verify": cmd_verify, "roots": cmd_roots}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--poles", help="pole-sequence JSON file")
    common.add_argument("--measure", help="measure JSON file (default: Lebesgue)")
    common.add_argument("--n", type=int, default=4, help="degree / number of nodes / factors")
    common.add_argument("--tau-turns", type=float, default=0.0, help="unimodular parameter as a fraction of a turn")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="output path (or 'csv'/'json' to pick the format)")
    common.add_argument("--format", choices=["json", "csv"], default=None)
    common.add_argument("--tol", type=float, default=None, help="override the pass/fail tolerance")

    p = argparse.ArgumentParser(prog="orfq", description="Orthogonal rational functions on the unit circle.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("orf", parents=[common], help="ORF table with recurrence data")
    s.add_argument("--kind", choices=["A", "B", "G"], default="G")
    s.add_argument("--emit-params", action="store_true")

    s = sub.add_parser("quad", parents=[common], help="rational Szego quadrature")
    s.add_argument("--route", choices=["numerator", "spectral", "both"], default="numerator")

    s = sub.add_parser("matrix", parents=[common], help="snake-shaped factorization")
    s.add_argument("--basis", choices=["phi", "varphi"], default="phi")
    s.add_argument("--emit", choices=["factors", "dense", "pattern"], default="factors")

    s = sub.add_parser("ampd", parents=[common], help="ordering-invariance harness")
    s.add_argument("--unitary", action="store_true")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--exhaustive", action="store_true")
    g.add_argument("--samples", type=int)

    s = sub.add_parser("verify", parents=[common], help="run the invariant suite")
    s.add_argument("--json", action="store_true")
    s.add_argument("--perturb", action="store_true", help=argparse.SUPPRESS)

    s = sub.add_parser("roots", parents=[common], help="polynomial roots via the companion matrix")
    s.add_argument("--coeffs", help="JSON list of ascending coefficients, or a file holding one")
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    fmt, out = ns.format, ns.out
    if out in ("csv", "json"):
        fmt, out = fmt or out, None
    if fmt is None:
        fmt = "csv" if ns.command == "quad" else ("json" if ns.command != "verify" else "text")
    extra = {k: v for k, v in vars(ns).items()
             if k in ("emit_params", "basis", "emit", "unitary", "samples", "json", "perturb", "coeffs")}
    return RunConfig(ns.command, ns.poles, ns.measure, ns.n, ns.tau_turns, getattr(ns, "kind", "G"),
                     getattr(ns, "route", "numerator"), fmt, out, ns.seed, ns.tol, extra)


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
        return COMMANDS[cfg.command](cfg)
    except (SpecError, ShapeMismatch) as exc:
        print(f"orfq: error: {exc}", file=sys.stderr)
        return EXIT_SPEC
    except NumericalError as exc:
        print(f"orfq: numerical failure ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
