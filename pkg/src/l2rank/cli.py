"""Command-line driver: ``l2rank <command> [input] [options]``.

Exit status is 0 on success, 2 when the only result is inconclusive (budget
exhausted, bound not certified), and 1 on errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from . import bounds, cosets, foxcalc, kernels, quotients, spectral, zlinalg
from .fixtures import UnknownFixture, load_fixture, read_presentation
from .presentations import (
    ParseError,
    Presentation,
    TorsionPresentation,
    parse_presentation,
    parse_ring_matrix,
    rational_str,
)

log = logging.getLogger("l2rank")

COMMANDS = ("betti1", "fox", "snf", "sigma", "pt-bound", "nrk-check", "l2-approx", "spectral", "dist")
EXIT_OK, EXIT_ERROR, EXIT_INCONCLUSIVE = 0, 1, 2
SCHEMA_FOR_COMMAND = {
    "betti1": "betti1", "fox": "fox", "snf": "snf", "sigma": "sigma",
    "pt-bound": "bound_report", "nrk-check": "bound_report", "l2-approx": "l2_approx",
    "spectral": "spectral", "dist": "distance",
}


def load_schema(command: str) -> dict:
    """JSON schema that the command's JSON report conforms to."""
    name = SCHEMA_FOR_COMMAND[command]
    return json.loads(resources.files("l2rank").joinpath("schemas", f"{name}.json").read_text())


@dataclass
class RunConfig:
    command: str
    source: str | None = None
    inline: str | None = None
    max_cosets: int = 10_000
    max_degree: int = 5
    chain: int = 4
    order_cap: int = quotients.DEFAULT_ORDER_CAP
    jobs: int = 1
    seed: int = 0
    format: str = "json"
    output: str | None = None
    kill: list[str] = field(default_factory=list)
    extra: list[str] = field(default_factory=list)
    matrix: str | None = None
    other: str | None = None
    max_radius: int = 6
    moments: int = 6
    eps: list[float] = field(default_factory=lambda: [0.5, 0.1, 0.01])
    log_c: float = 1.0
    max_quotients: int = 8
    pool_samples: int = 12

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        for name in ("max_cosets", "max_degree", "chain", "order_cap", "jobs", "max_quotients"):
            if getattr(self, name) < 1:
                raise ValueError(f"--{name.replace('_', '-')} must be positive")


class Inconclusive(Exception):
    def __init__(self, report: dict):
        super().__init__("inconclusive")
        self.report = report


def resolve_presentation(source: str | None, inline: str | None) -> Presentation:
    if inline is not None:
        return parse_presentation(inline)
    if source is None:
        raise ValueError("no input presentation (give a path, a fixture name or --inline)")
    if Path(source).is_file():
        return read_presentation(source)
    try:
        return load_fixture(source)
    except UnknownFixture:
        raise ValueError(f"no such file or fixture: {source}") from None


def _words(p: Presentation, items: list[str]):
    out = []
    for item in items:
        out += [p.word(w) for w in item.split(",") if w.strip()]
    return out


def _cmd_betti1(cfg, p):
    rank, torsion = zlinalg.betti1(p)
    return {"presentation": p.format(), "rank": rank, "torsion": torsion,
            "perfect": rank == 0 and not torsion}


def _cmd_fox(cfg, p):
    bundle = foxcalc.extend_jacobian(p, _words(p, cfg.extra))
    return {
        "presentation": p.format(),
        "generators": list(p.generators),
        "jacobian": [[e.format(p.generators) for e in row] for row in bundle.jacobian.entries],
        "augmented": foxcalc.augment_matrix(bundle.jacobian),
        "extension_words": [w.format(p.generators) for w in bundle.extension_words],
        "extended_augmented": foxcalc.augment_matrix(bundle.extended),
    }


def _cmd_snf(cfg, p):
    if cfg.matrix:
        m = json.loads(cfg.matrix)
        label = "matrix"
    else:
        m = foxcalc.augmented_jacobian(p)
        label = p.format()
    res = zlinalg.smith_normal_form(m)
    return {"input": label, "diagonal": list(res.diagonal), "rank": res.rank,
            "torsion": list(res.torsion)}


def _torsion(p) -> TorsionPresentation:
    if not isinstance(p, TorsionPresentation):
        raise ValueError("not a torsion presentation: every relator must be written R^n")
    return p


def _cmd_sigma(cfg, p):
    tp = _torsion(p)
    return {"presentation": tp.format(), "sigma": rational_str(bounds.sigma(tp)),
            "exponents": list(tp.exponents)}


def _cmd_pt_bound(cfg, p):
    tp = _torsion(p)
    pool = quotients.search_finite_quotients(tp, cfg.max_degree, jobs=cfg.jobs)
    rep = bounds.pt_lower_bound(tp, pool)
    rep.upper = bounds.generator_bound(tp).upper
    out = rep.to_dict()
    out["sigma"] = rational_str(bounds.sigma(tp))
    if not rep.certified:
        raise Inconclusive(out)
    return out


def _cmd_nrk(cfg, p):
    if not cfg.kill:
        raise ValueError("nrk-check needs at least one --kill word")
    rep = bounds.normal_rank_witness(p, _words(p, cfg.kill), cfg.max_cosets)
    out = rep.to_dict()
    if Path(cfg.source or "").stem.startswith("hn_"):
        out["notes"].append("fixture uses the smallest distinct primes; hyperbolicity is not claimed")
    if not rep.certified:
        raise Inconclusive(out)
    return out


def _cmd_l2(cfg, p):
    pool = quotients.search_finite_quotients(p, cfg.max_degree, jobs=cfg.jobs)
    chain = quotients.build_chain(p, pool, cfg.chain, cfg.order_cap)
    if not chain.quotients:
        raise Inconclusive({"presentation": p.format(), "chain": [], "limsup_lower_bound": "0/1",
                            "intersection_trivial_certified": False})
    est = quotients.luck_estimate(p, chain, jobs=cfg.jobs)
    out = est.to_dict(p.format())
    picked = [q for q in pool if q.order > 1][:cfg.pool_samples]
    samples = [quotients.kernel_betti1(q) for q in picked]
    out["samples"] = [{"index": s.index, "betti1": s.betti1, "ratio": rational_str(s.ratio)}
                      for s in samples]
    out["notes"] = ["ratios are lower-bound evidence for the L2-Betti number; "
                    "the chain's intersection is not certified trivial",
                    "limsup_lower_bound is the largest ratio over the tail half of the chain"]
    return out


def _float(x: float) -> float:
    # 12 significant digits keep reports stable across LAPACK builds
    return float(f"{x:.12g}") + 0.0


def _cmd_spectral(cfg, p):
    if cfg.matrix:
        m = parse_ring_matrix(cfg.matrix, p.generators)
    else:
        m = foxcalc.fox_jacobian(p)
    pool = quotients.search_finite_quotients(p, cfg.max_degree, jobs=cfg.jobs)
    pool = [q for q in pool if q.order > 1][:cfg.max_quotients]
    reports, measures = [], []
    for q in pool:
        mu = spectral.spectral_measure(m, q)
        measures.append(mu)
        target = m.adjoint() @ m if mu.squared else m
        sym = spectral.symbolic_moments(target, q, cfg.moments)
        reports.append({
            "matrix": m.format(p.generators),
            "quotient_order": q.order,
            "squared": mu.squared,
            "atoms": [[_float(x), rational_str(mass)] for x, mass in mu.atoms],
            "moments": {str(k): {"symbolic": sym[k], "numeric": _float(mu.moment(k))}
                        for k in range(cfg.moments + 1)},
            "kernel_dimension": rational_str(mu.zero_mass),
        })
    bound = spectral.log_bound_report(measures, cfg.log_c, cfg.eps)
    return {"presentation": p.format(), "reports": reports, "log_bound": bound.to_dict(),
            "_csv": bound.to_csv()}


def _cmd_dist(cfg, p):
    if cfg.other is None:
        raise ValueError("dist needs --other PRESENTATION")
    q = resolve_presentation(cfg.other, None) if Path(cfg.other).is_file() or "<" not in cfg.other \
        else parse_presentation(cfg.other)
    a = bounds.MarkedGroup.from_presentation(p, membership_budget=cfg.max_cosets,
                                             quotient_degree=cfg.max_degree)
    b = bounds.MarkedGroup.from_presentation(q, membership_budget=cfg.max_cosets,
                                             quotient_degree=cfg.max_degree)
    rep = bounds.marked_distance(a, b, cfg.max_radius).to_dict()
    if rep["kind"] == "interval":
        raise Inconclusive(rep)
    return rep


_DISPATCH = {
    "betti1": _cmd_betti1, "fox": _cmd_fox, "snf": _cmd_snf, "sigma": _cmd_sigma,
    "pt-bound": _cmd_pt_bound, "nrk-check": _cmd_nrk, "l2-approx": _cmd_l2,
    "spectral": _cmd_spectral, "dist": _cmd_dist,
}


def _flatten(prefix: str, value, rows: list):
    if isinstance(value, dict):
        for k, v in value.items():
            _flatten(f"{prefix}.{k}" if prefix else k, v, rows)
    elif isinstance(value, list) and value and isinstance(value[0], (dict, list)):
        for i, v in enumerate(value):
            _flatten(f"{prefix}[{i}]", v, rows)
    else:
        rows.append((prefix, json.dumps(value) if isinstance(value, list) else value))


def render(cfg: RunConfig, report: dict) -> str:
    csv_text = report.pop("_csv", None)
    if cfg.format == "json":
        return json.dumps(report, indent=2) + "\n"
    if cfg.format == "csv":
        if csv_text is not None:
            return csv_text
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if cfg.command == "l2-approx":
            w.writerow(["index", "betti1", "ratio"])
            for s in report.get("chain", []):
                w.writerow([s["index"], s["betti1"], s["ratio"]])
        else:
            rows: list = []
            _flatten("", report, rows)
            w.writerow(["key", "value"])
            w.writerows(rows)
        return buf.getvalue()
    rows = []
    _flatten("", report, rows)
    return "".join(f"{k}: {v}\n" for k, v in rows)


def run_command(cfg: RunConfig, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    status = EXIT_OK
    log.info("command %s, kernel backend %s", cfg.command, kernels.BACKEND)
    try:
        standalone = cfg.command == "snf" and cfg.matrix and not (cfg.source or cfg.inline)
        p = None if standalone else resolve_presentation(cfg.source, cfg.inline)
        report = _DISPATCH[cfg.command](cfg, p)
    except Inconclusive as exc:
        report = exc.report
        status = EXIT_INCONCLUSIVE
    except (ParseError, ValueError, quotients.OrderCapExceeded, cosets.TableNotClosed) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_ERROR
    text = render(cfg, report)
    if cfg.output:
        Path(cfg.output).write_text(text, encoding="utf-8")
    else:
        out.write(text)
    return status


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # usage errors share the generic error status; 2 is reserved for inconclusive
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="l2rank", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("source", nargs="?", help="presentation file or fixture name")
    ap.add_argument("--inline", help="presentation text, e.g. '< a, b | a^2, b^3 >'")
    ap.add_argument("--max-cosets", type=int, default=10_000)
    ap.add_argument("--max-degree", type=int, default=5)
    ap.add_argument("--chain", type=int, default=4, help="chain length for l2-approx")
    ap.add_argument("--order-cap", type=int, default=quotients.DEFAULT_ORDER_CAP)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--format", choices=("json", "csv", "text"), default="json")
    ap.add_argument("--output", help="write the report here instead of stdout")
    ap.add_argument("--kill", action="append", default=[], help="normal generator words (nrk-check)")
    ap.add_argument("--extra", action="append", default=[], help="extension words (fox)")
    ap.add_argument("--matrix", help="group-ring matrix 'e11, e12; e21, e22' (spectral) "
                                     "or JSON integer matrix (snf)")
    ap.add_argument("--other", help="second presentation for dist")
    ap.add_argument("--max-radius", type=int, default=6)
    ap.add_argument("--moments", type=int, default=6)
    ap.add_argument("--eps", type=float, action="append", help="eps grid for the log bound")
    ap.add_argument("--log-c", type=float, default=1.0, help="constant C tested by the log bound")
    ap.add_argument("--max-quotients", type=int, default=8)
    ap.add_argument("--pool-samples", type=int, default=12)
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_intermixed_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    kw = vars(args)
    kw.pop("verbose")
    if kw["eps"] is None:
        kw.pop("eps")
    try:
        cfg = RunConfig(**kw)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return run_command(cfg)


if __name__ == "__main__":
    sys.exit(main())
