"""Command-line interface: ``orbitsum <command> <problem> [options]``.

Exit status: 0 on success (or a True certificate), 1 on Failed, 2 on usage
and parse errors, 3 when the input is unsupported or a budget is exhausted.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time

from ..algebra.scalars import QuadScalar, rat
from ..certifier import DEFAULT_TERMS, certificate_from_json, replay
from ..cones import OrderWeight
from ..dde import DEFAULT_VERIFY_ORDER, oracle_expand
from ..errors import (
    OrbitSumError,
    PreconditionViolated,
    ProblemParseError,
    ResourceExhausted,
    Unsupported,
)
from ..pipeline import SolveConfig, StageError, render_text, solve
from .cache import Cache, cache_key
from .problem import Problem, load_problem, parse_problem, print_problem

__all__ = [
    "Problem",
    "main",
    "parse_problem",
    "parse_weight",
    "parse_weight_stages",
    "print_problem",
    "load_problem",
]

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_UNSUPPORTED = 0, 1, 2, 3

_RAT = r"[+-]?\d+(?:/\d+)?"
_COMPONENT = re.compile(rf"^(?P<a>{_RAT})?(?:(?P<b>[+-]?(?:\d+(?:/\d+)?)?)r)?$")


class UsageError(Exception):
    pass


def _component(text: str, D: int):
    text = text.replace(" ", "")
    m = _COMPONENT.match(text)
    if not text or not m:
        raise UsageError(f"cannot read weight component {text!r}")
    a = rat(m.group("a") or 0)
    b = m.group("b")
    if b is None:
        return a
    if b in ("", "+"):
        b = "1"
    elif b == "-":
        b = "-1"
    if m.group("a") is not None and b[0] not in "+-":
        raise UsageError(f"cannot read weight component {text!r}")
    return QuadScalar(a, rat(b), D).simplify()


def parse_weight(text: str, radicand: int = 2) -> OrderWeight:
    """``"a1+b1r:a2+b2r"`` means ``(a1 + b1 sqrt(D), a2 + b2 sqrt(D))``."""
    parts = text.split(":")
    if len(parts) != 2:
        raise UsageError("a weight has two components separated by ':'")
    try:
        return OrderWeight.quad(*(_component(p, radicand) for p in parts))
    except ValueError as exc:
        raise UsageError(f"invalid weight: {exc}") from exc


def parse_weight_stages(text: str) -> OrderWeight:
    """``"u11,u12;u21,u22"``: rational stage vectors applied lexicographically."""
    try:
        stages = [[rat(c.strip()) for c in s.split(",")] for s in text.split(";")]
        return OrderWeight.lex(*stages)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"invalid weight stages: {exc}") from exc


def _int_option(value, name):
    try:
        n = int(value)
    except (TypeError, ValueError):
        raise UsageError(f"{name} must be an integer") from None
    if n < 0:
        raise UsageError(f"{name} must be non-negative")
    return n


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="orbitsum", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, problem=True):
        if problem:
            sp.add_argument("problem", help="problem file")
        sp.add_argument("--json", action="store_true", help="print the JSON report")
        sp.add_argument("--output", "-o", help="write the JSON report to this file")
        sp.add_argument("--cache-dir", help="cache directory (default: $ORBITSUM_CACHE_DIR)")
        sp.add_argument("--no-cache", action="store_true", help="disable the cache")
        sp.add_argument("--timing", action="store_true", help="add timings to the report")
        sp.add_argument("--verify-order", type=int, help="order of the kernel-form check")
        sp.add_argument("--order", type=int, help="series order for oracle comparisons")

    def certifying(sp):
        sp.add_argument("--weight", help='order weight "a1+b1r:a2+b2r"')
        sp.add_argument("--radicand", type=int, help="D in the weight syntax (default 2)")
        sp.add_argument("--weight-stages", help='lex order "u11,u12;u21,u22"')
        sp.add_argument("--jobs", type=int, default=1, help="parallel order regions")
        sp.add_argument("--nterms", type=int, help="explicit series terms per root")

    for name, help_ in (
        ("expand", "series oracle to the given order"),
        ("kernel", "derive or verify the kernel form"),
        ("orbit", "compute the orbit of the kernel"),
        ("orbitsum", "section-free orbit equations"),
    ):
        common(sub.add_parser(name, help=help_))
    for name, help_ in (
        ("certify", "run the positive-part certifier"),
        ("solve", "full pipeline with oracle cross-check"),
    ):
        sp = sub.add_parser(name, help=help_)
        common(sp)
        certifying(sp)
    rp = sub.add_parser("replay", help="re-verify a certificate or report")
    rp.add_argument("report", help="JSON certificate or report")
    rp.add_argument("--json", action="store_true")
    rp.add_argument("--output", "-o")
    return p


def _config(args, problem: Problem) -> SolveConfig:
    opts = problem.options
    cfg = SolveConfig()
    order = args.order if args.order is not None else opts.get("order")
    if order is not None:
        cfg.order = _int_option(order, "order")
    vo = args.verify_order if args.verify_order is not None else opts.get("verify-order")
    cfg.verify_order = _int_option(vo, "verify-order") if vo is not None else DEFAULT_VERIFY_ORDER
    cfg.timing = args.timing
    weight = getattr(args, "weight", None) or opts.get("weight")
    stages = getattr(args, "weight_stages", None) or opts.get("weight-stages")
    if weight and stages:
        raise UsageError("give either a weight or weight stages, not both")
    radicand = getattr(args, "radicand", None) or opts.get("radicand") or 2
    if weight:
        cfg.weight = parse_weight(weight, _int_option(radicand, "radicand"))
    elif stages:
        cfg.weight = parse_weight_stages(stages)
    cfg.jobs = max(1, getattr(args, "jobs", 1) or 1)
    nterms = getattr(args, "nterms", None) or opts.get("nterms")
    cfg.nterms = _int_option(nterms, "nterms") if nterms is not None else DEFAULT_TERMS
    return cfg


def _config_key(cfg: SolveConfig) -> dict:
    # jobs and timing never change results
    return {
        "order": cfg.order,
        "verify_order": cfg.verify_order,
        "weight": cfg.weight.to_json() if cfg.weight is not None else None,
        "nterms": cfg.nterms,
        "max_size": cfg.max_size,
        "max_ext_deg": cfg.max_ext_deg,
        "max_degree": cfg.max_degree,
    }


_STOP = {"kernel": "kernel", "orbit": "orbit", "orbitsum": "orbit-sum",
         "certify": "certify", "solve": "done"}


def _expand(problem: Problem, cfg: SolveConfig) -> dict:
    series = oracle_expand(problem.dde, cfg.order)
    return {
        "problem": problem.name,
        "order": cfg.order,
        "series": {
            u: [str(series[u].coeff_in("t", n)) for n in range(cfg.order + 1)]
            for u in problem.dde.unknowns
        },
        "status": "True",
        "stage": "expand",
    }


def _render_expand(rep: dict) -> str:
    lines = [f"problem: {rep['problem']}"]
    for u, layers in rep["series"].items():
        terms = []
        for n, c in enumerate(layers):
            if c == "0":
                continue
            mono = "" if n == 0 else ("t" if n == 1 else f"t^{n}")
            if not mono:
                terms.append(c)
            else:
                terms.append(f"{mono}" if c == "1" else f"({c})*{mono}")
        lines.append(f"{u} = " + (" + ".join(terms) if terms else "0")
                     + f" + O(t^{rep['order'] + 1})")
    return "\n".join(lines) + "\n"


def _emit(args, rep: dict, text: str):
    doc = json.dumps(rep, sort_keys=True, indent=2) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(doc)
    sys.stdout.write(doc if args.json else text)


def _run_problem(args) -> int:
    try:
        problem = load_problem(args.problem)
    except OSError as exc:
        raise UsageError(f"cannot read {args.problem}: {exc.strerror}") from exc
    cfg = _config(args, problem)
    cache = Cache.from_args(args.cache_dir, args.no_cache)
    key = cache_key(args.command, print_problem(problem), _config_key(cfg))

    def compute():
        if args.command == "expand":
            return _expand(problem, cfg)
        cfg_nt = SolveConfig(**{**cfg.__dict__, "timing": False})
        sol = solve(problem.dde, problem.kernel, cfg_nt, problem.name, _STOP[args.command])
        return sol.report

    t0 = time.perf_counter()
    rep, hit = cache.memo(key, compute)
    if args.timing:
        rep = dict(rep)
        rep["timing"] = {"total": f"{time.perf_counter() - t0:.3f}s",
                         "cache": "hit" if hit else ("miss" if cache.enabled else "off")}
    text = _render_expand(rep) if args.command == "expand" else render_text(rep)
    _emit(args, rep, text)
    return EXIT_OK if rep["status"] == "True" else EXIT_FAILED


def _run_replay(args) -> int:
    try:
        with open(args.report, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {args.report}: {exc.strerror}") from exc
    except ValueError as exc:
        raise UsageError(f"{args.report} is not JSON: {exc}") from exc
    cert_doc = doc.get("certificate", doc) if isinstance(doc, dict) else None
    if not isinstance(cert_doc, dict) or "verdict" not in cert_doc:
        raise UsageError("no certificate in the document")
    if cert_doc.get("reason") == "no sections":
        ok, verdict = True, "True"
    else:
        try:
            cert = certificate_from_json(cert_doc)
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"malformed certificate: {exc}") from exc
        ok, verdict = replay(cert), cert_doc["verdict"]
    rep = {"replay": "verified" if ok else "mismatch", "verdict": verdict}
    _emit(args, rep, f"replay: {rep['replay']} (recorded verdict {verdict})\n")
    return EXIT_OK if ok else EXIT_FAILED


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        if args.command == "replay":
            return _run_replay(args)
        return _run_problem(args)
    except (UsageError, ProblemParseError) as exc:
        print(f"orbitsum: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except StageError as exc:
        print(f"orbitsum: {exc}", file=sys.stderr)
        if isinstance(exc.error, (Unsupported, ResourceExhausted, PreconditionViolated)):
            return EXIT_UNSUPPORTED
        return EXIT_FAILED
    except (Unsupported, ResourceExhausted, PreconditionViolated) as exc:
        print(f"orbitsum: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except OrbitSumError as exc:
        print(f"orbitsum: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
