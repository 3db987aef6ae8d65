"""``hdxlift`` command line: generate, lift, verify and chain local lifts.

Every file is canonical JSON.  Metadata blocks hold the resolved
configuration and never a timestamp or a wall time, so a rerun with the
same inputs and seed reproduces each file byte for byte.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .complex import SimplicialComplex, complete_complex
from .derand import DerandParams, greedy_derand_lift
from .errors import HDXError
from .io import (
    check_lineage,
    complex_from_json,
    complex_hash,
    complex_to_json,
    lineage_block,
    read_json,
    signing_from_json,
    signing_hash,
    signing_to_json,
    write_json,
)
from .kernels import BACKEND
from .lifting import local_lift
from .lll import LLLConfig, is_nice, moser_tardos_lift, random_lift_signing
from .spectral import alpha_threshold
from .verifier import ALL_LAWS, audit_link_lifts, certify_hdx, link_diameter_stats, verify_lift_laws

log = logging.getLogger("hdxlift")

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_ERROR = 2


def _threads(value) -> int:
    if value is not None:
        return max(1, int(value))
    return max(1, int(os.environ.get("HDXLIFT_THREADS", "1")))


def _meta(command: str, config: dict) -> dict:
    return {"tool": "hdxlift", "version": __version__, "command": command, "config": config}


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True, indent=1))
    else:
        print(text)


def _fmt(x) -> str:
    if x is None:
        return "-"
    if isinstance(x, float):
        return "inf" if math.isinf(x) else f"{x:.6g}"
    return str(x)


def _cert_text(cert) -> str:
    lines = [f"k={cert.k}  faces per level {list(cert.counts)}  profile {list(cert.profile) if cert.profile else 'irregular'}"]
    lines.append(f"{'level':>5} {'links':>7} {'two-sided':>11} {'one-sided':>11} {'disconn':>7}")
    for s in cert.per_level:
        lines.append(f"{s.level:>5} {s.faces:>7} {_fmt(s.two_sided):>11} {_fmt(s.one_sided):>11} {s.disconnected:>7}")
    lines.append(f"lambda two-sided {_fmt(cert.two_sided)}  one-sided {_fmt(cert.one_sided)}")
    return "\n".join(lines)


def _load_complex(path) -> tuple[SimplicialComplex, dict]:
    data = read_json(path)
    return complex_from_json(data), data


# --- gen ---------------------------------------------------------------------


def cmd_gen(args) -> int:
    if args.kind == "complete":
        X = complete_complex(args.n, args.k)
        config = {"kind": "complete", "n": args.n, "k": args.k}
    else:
        X, _ = _load_complex(args.input)
        config = {"kind": "file", "input": Path(args.input).name}
    cert = certify_hdx(X, _threads(args.threads))
    doc = complex_to_json(X, meta=_meta("gen", config))
    if args.out:
        write_json(args.out, doc)
    payload = {"complex_hash": complex_hash(X), "certificate": cert.to_json()}
    _emit(args, payload, f"complex {complex_hash(X)}\n{_cert_text(cert)}")
    return EXIT_OK


# --- single lifts ------------------------------------------------------------


def _mt_config(X: SimplicialComplex, args, seed: int) -> LLLConfig:
    return LLLConfig.for_complex(
        X,
        beta=args.beta,
        seed=seed,
        lambda_prime_target=args.lambda_target,
        sparsity_t=args.t,
        max_resamples=args.max_resamples,
        override_nice=args.override_nice,
    )


def _derand_params(X: SimplicialComplex, args) -> DerandParams:
    gamma = None if args.gamma is None else Fraction(args.gamma)
    return DerandParams.for_complex(X, args.beta, r=args.r, C2=args.c2, gamma=gamma)


def _sign(X: SimplicialComplex, mode: str, args, seed: int | None):
    """Run one lifting engine; returns the signing, stats JSON and config JSON."""
    if mode == "random":
        f = random_lift_signing(X, seed)
        return f, {"mode": "random"}, {"mode": "random", "seed": seed}, None
    if mode == "mt":
        config = _mt_config(X, args, seed)
        f, stats = moser_tardos_lift(X, config)
        resolved = {
            "mode": "mt",
            "seed": seed,
            "beta": config.beta,
            "lambda_target": config.lambda_prime_target,
            "t": config.sparsity_t,
            "max_resamples": config.max_resamples,
            "override_nice": config.override_nice,
        }
        return f, stats.to_json(), resolved, config
    params = _derand_params(X, args)
    f, stats = greedy_derand_lift(X, params, override_hypotheses=args.override_hypotheses)
    resolved = {"mode": "derand", "override_hypotheses": args.override_hypotheses, **params.to_json()}
    return f, stats.to_json(), resolved, None


def _stage_report(X, f, X_hat, stats_json, config, threads, audit_config) -> dict:
    laws = verify_lift_laws(X, f, X_hat, threads=threads)
    report = {"stats": stats_json, "laws": laws.to_json(), "lineage": lineage_block(X, f)}
    report["lineage"]["lift_hash"] = complex_hash(X_hat)
    if audit_config is not None:
        audit = audit_link_lifts(
            X, X_hat, audit_config.lambda_prime_target, audit_config.beta, audit_config.sparsity_t, threads=threads
        )
        report["audit"] = audit.to_json()
    report["meta"] = _meta("lift", config)
    return report


def _write_stage(out_dir: Path, stem: str, X, f, X_hat, report, config) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    meta = _meta("lift", config)
    write_json(out_dir / f"{stem}.signing.json", signing_to_json(f, meta=meta))
    write_json(out_dir / f"{stem}.complex.json", complex_to_json(X_hat, meta=meta, lineage=lineage_block(X, f)))
    write_json(out_dir / f"{stem}.report.json", report)


def cmd_lift(args, mode: str) -> int:
    X, _ = _load_complex(args.base)
    threads = _threads(args.threads)
    f, stats_json, config, audit_config = _sign(X, mode, args, getattr(args, "seed", None))
    config = {"base": complex_hash(X), **config}
    X_hat = local_lift(X, f)
    report = _stage_report(X, f, X_hat, stats_json, config, threads, audit_config)
    _write_stage(Path(args.out_dir), args.name, X, f, X_hat, report, config)
    ok = report["laws"]["passed"] and report.get("audit", {}).get("passed", True)
    lines = [
        f"lift {complex_hash(X_hat)} from base {complex_hash(X)}",
        f"signing {signing_hash(f)}",
        f"laws {'pass' if report['laws']['passed'] else 'FAIL'}",
    ]
    if "audit" in report:
        lines.append(f"link audit {'pass' if report['audit']['passed'] else 'FAIL'}  max signed norm {_fmt(report['audit']['max_norm'])}")
    _emit(args, report, "\n".join(lines))
    return EXIT_OK if ok else EXIT_FAIL


# --- verify ------------------------------------------------------------------


def cmd_verify(args) -> int:
    laws = ALL_LAWS if not args.laws else tuple(x.strip() for x in args.laws.split(",") if x.strip())
    unknown = [x for x in laws if x not in ALL_LAWS]
    if unknown:
        print(f"error: unknown laws {unknown}; choose from {', '.join(ALL_LAWS)}", file=sys.stderr)
        return EXIT_ERROR
    threads = _threads(args.threads)
    try:
        X_hat, lift_doc = _load_complex(args.path)
    except (HDXError, ValueError, KeyError, TypeError) as exc:
        payload = {"passed": False, "first_failure": {"law": "load", "detail": f"{type(exc).__name__}: {exc}"}}
        _emit(args, payload, f"FAIL load: {type(exc).__name__}: {exc}")
        return EXIT_FAIL
    if args.base is None or args.signing is None:
        cert = certify_hdx(X_hat, threads)
        payload = {"passed": True, "certificate": cert.to_json()}
        _emit(args, payload, f"valid complex {complex_hash(X_hat)}\n{_cert_text(cert)}")
        return EXIT_OK
    X, _ = _load_complex(args.base)
    try:
        f = signing_from_json(read_json(args.signing), X)
    except (HDXError, ValueError, KeyError, TypeError) as exc:
        payload = {"passed": False, "first_failure": {"law": "signing", "detail": f"{type(exc).__name__}: {exc}"}}
        _emit(args, payload, f"FAIL signing: {type(exc).__name__}: {exc}")
        return EXIT_FAIL
    report = verify_lift_laws(X, f, X_hat, laws=laws, certificates=not args.no_certificates, threads=threads)
    payload = report.to_json()
    lineage = check_lineage(lift_doc, X, f) if "lineage" in lift_doc else []
    payload["lineage"] = {"checked": "lineage" in lift_doc, "problems": lineage}
    passed = report.passed and not lineage
    payload["passed"] = passed
    first = report.first_failure()
    if first is not None:
        payload["first_failure"] = {"law": first.name, "detail": first.detail}
    elif lineage:
        payload["first_failure"] = {"law": "lineage", "detail": lineage[0]}
    lines = [f"{'pass' if r.passed else 'FAIL'} {name}{': ' + r.detail if r.detail else ''}" for name, r in report.laws.items()]
    if "lineage" in lift_doc:
        lines.append("pass lineage" if not lineage else f"FAIL lineage: {lineage[0]}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if passed else EXIT_FAIL


# --- family ------------------------------------------------------------------


def _stage_seeds(seed: int | None, stages: int) -> list[int | None]:
    if seed is None:
        return [None] * stages
    return [int(s.generate_state(1, np.uint64)[0]) for s in np.random.SeedSequence(seed).spawn(stages)]


def cmd_family(args) -> int:
    X0, _ = _load_complex(args.base)
    threads = _threads(args.threads)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    n0 = X0.vertex_count
    base_cert = certify_hdx(X0, threads)
    family = {
        "base_hash": complex_hash(X0),
        "base_cert": base_cert.to_json(),
        "stages_requested": args.i,
        "mode": args.mode,
        "stages": [],
    }
    X = X0
    seeds = _stage_seeds(args.seed, args.i)
    top = X0.regularity_profile().degrees
    top_degrees = [top[-1] if top else None]
    counts = [n0]
    error = None
    for j in range(1, args.i + 1):
        try:
            f, stats_json, config, audit_config = _sign(X, args.mode, args, seeds[j - 1])
        except HDXError as exc:
            error = {"stage": j, "error": f"{type(exc).__name__}: {exc}"}
            break
        config = {"base": complex_hash(X), "stage": j, "family_seed": args.seed, **config}
        X_hat = local_lift(X, f)
        report = _stage_report(X, f, X_hat, stats_json, config, threads, audit_config)
        _write_stage(out_dir, f"stage_{j}", X, f, X_hat, report, config)
        family["stages"].append(
            {
                "stage": j,
                "complex_hash": complex_hash(X_hat),
                "signing_hash": signing_hash(f),
                "laws_passed": report["laws"]["passed"],
            }
        )
        X = X_hat
        counts.append(X.vertex_count)
        p = X.regularity_profile().degrees
        top_degrees.append(p[-1] if p else None)
    # lineage is re-read from disk so the chain is checked as stored
    lineage_problems = []
    prev = X0
    for entry in family["stages"]:
        j = entry["stage"]
        doc = read_json(out_dir / f"stage_{j}.complex.json")
        f = signing_from_json(read_json(out_dir / f"stage_{j}.signing.json"), prev)
        lineage_problems += [f"stage {j}: {p}" for p in check_lineage(doc, prev, f)]
        prev = complex_from_json(doc)
    expected_counts = [2**j * n0 for j in range(len(counts))]
    family.update(
        {
            "vertex_counts": counts,
            "expected_vertex_counts": expected_counts,
            "vertex_counts_ok": counts == expected_counts,
            "top_degrees": top_degrees,
            "top_degree_invariant": len(set(top_degrees)) == 1 and top_degrees[0] is not None,
            "lineage_ok": not lineage_problems,
            "lineage_problems": lineage_problems,
            "error": error,
        }
    )
    family["passed"] = (
        error is None
        and family["vertex_counts_ok"]
        and family["top_degree_invariant"]
        and family["lineage_ok"]
        and all(s["laws_passed"] for s in family["stages"])
    )
    family["meta"] = _meta(
        "family",
        {"base": complex_hash(X0), "i": args.i, "mode": args.mode, "seed": args.seed, "stage_seeds": seeds},
    )
    write_json(out_dir / "family.report.json", family)
    lines = [f"stage {s['stage']}: {c} vertices, d_(k-1)={d}, laws {'pass' if s['laws_passed'] else 'FAIL'}"
             for s, c, d in zip(family["stages"], counts[1:], top_degrees[1:])]
    lines.insert(0, f"base: {n0} vertices, d_(k-1)={top_degrees[0]}")
    if error:
        lines.append(f"aborted at stage {error['stage']}: {error['error']}")
    lines.append(f"family {'pass' if family['passed'] else 'FAIL'}")
    _emit(args, family, "\n".join(lines))
    return EXIT_OK if family["passed"] else EXIT_FAIL


# --- stats -------------------------------------------------------------------


def cmd_stats(args) -> int:
    X, _ = _load_complex(args.path)
    threads = _threads(args.threads)
    cert = certify_hdx(X, threads)
    payload = {"complex_hash": complex_hash(X), "certificate": cert.to_json(), "backend": BACKEND}
    lines = [f"complex {complex_hash(X)}", _cert_text(cert)]
    if X.k >= 1:
        diam = link_diameter_stats(X, threads)
        payload["link_diameters"] = diam.to_json()
        lines.append(f"(k-2)-link diameters min {_fmt(diam.min)} max {_fmt(diam.max)} mean {_fmt(diam.mean)}")
    if X.k >= 2 and X.regularity_profile().regular:
        nice = is_nice(X)
        payload["niceness"] = nice.to_json()
        lines.append(f"nice: {nice.nice} (log2 lhs {nice.log2_lhs:.6g}, log2 rhs {nice.log2_rhs:.6g})")
        d = X.level_degree(X.k - 1)
        if d >= 2:
            payload["alpha"] = alpha_threshold(X.k, d)
            lines.append(f"alpha threshold {payload['alpha']:.6g}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


# --- parser ------------------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--threads", type=int, default=None, help="worker threads (default $HDXLIFT_THREADS or 1)")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    return p


def _mt_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--lambda-target", type=float, default=None)
    p.add_argument("--t", type=int, default=None)
    p.add_argument("--max-resamples", type=int, default=None)
    p.add_argument("--override-nice", action="store_true")


def _derand_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--c2", type=float, default=8.0)
    p.add_argument("--gamma", default=None, help="exact rational, e.g. 1e30 or 7/2")
    p.add_argument("--override-hypotheses", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="hdxlift", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"hdxlift {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", parents=[common], help="write a base complex")
    gsub = gen.add_subparsers(dest="kind", required=True)
    gc = gsub.add_parser("complete", parents=[common])
    gc.add_argument("--n", type=int, required=True)
    gc.add_argument("--k", type=int, required=True)
    gc.add_argument("--out", default=None)
    gf = gsub.add_parser("file", parents=[common])
    gf.add_argument("--in", dest="input", required=True)
    gf.add_argument("--out", default=None)

    def lift_parser(name, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("--base", required=True)
        p.add_argument("--out-dir", default=".")
        p.add_argument("--name", default="lift", help="file stem for the outputs")
        return p

    lr = lift_parser("lift-random", "lift by a uniform seeded signing")
    lr.add_argument("--seed", type=int, required=True)
    lm = lift_parser("lift-mt", "lift by Moser-Tardos resampling")
    lm.add_argument("--seed", type=int, required=True)
    lm.add_argument("--beta", type=float, required=True)
    _mt_flags(lm)
    ld = lift_parser("lift-derand", "lift by conditional expectations")
    ld.add_argument("--beta", type=float, required=True)
    _derand_flags(ld)

    v = sub.add_parser("verify", parents=[common], help="check a lift against its base and signing")
    v.add_argument("path")
    v.add_argument("--base", default=None)
    v.add_argument("--signing", default=None)
    v.add_argument("--laws", default=None, help=f"comma-separated subset of {','.join(ALL_LAWS)}")
    v.add_argument("--no-certificates", action="store_true")

    fam = sub.add_parser("family", parents=[common], help="iterate lifts from a base complex")
    fam.add_argument("--base", required=True)
    fam.add_argument("--i", type=int, required=True)
    fam.add_argument("--mode", choices=("random", "mt", "derand"), required=True)
    fam.add_argument("--seed", type=int, default=None)
    fam.add_argument("--out-dir", required=True)
    fam.add_argument("--beta", type=float, default=None)
    _mt_flags(fam)
    _derand_flags(fam)

    st = sub.add_parser("stats", parents=[common], help="certificate and degree statistics")
    st.add_argument("path")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    if args.command == "family":
        if args.i < 0:
            parser.error("--i must be >= 0")
        if args.mode in ("random", "mt") and args.seed is None and args.i > 0:
            parser.error(f"--seed is required for mode {args.mode}")
        if args.mode in ("mt", "derand") and args.beta is None and args.i > 0:
            parser.error(f"--beta is required for mode {args.mode}")
    try:
        if args.command == "gen":
            return cmd_gen(args)
        if args.command in ("lift-random", "lift-mt", "lift-derand"):
            return cmd_lift(args, args.command.split("-", 1)[1])
        if args.command == "verify":
            return cmd_verify(args)
        if args.command == "family":
            return cmd_family(args)
        return cmd_stats(args)
    except (HDXError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
