"""End-to-end solver: kernel form, orbit, orbit sum, certificate, oracle check."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .algebra.laurent import VARS3, LaurentPoly
from .algebra.ratfun import is_laurent, ratfun_to_str, to_laurent, to_ratfun
from .certifier import DEFAULT_TERMS, Certificate, input_from_orbit_sum, ppe
from .cones import OrderWeight
from .dde import (
    DDE,
    DEFAULT_VERIFY_ORDER,
    KernelEquation,
    delta,
    oracle_expand,
    support_cone_bound,
    to_kernel_form,
    verify_kernel_form,
)
from .errors import OrbitSumError, UnsupportedSystem
from .orbit import (
    DEFAULT_MAX_DEGREE,
    DEFAULT_MAX_EXT_DEG,
    DEFAULT_MAX_SIZE,
    compute_orbit,
    normalized_orbit_sum,
    orbit_equations,
    section_free_basis,
)
from .puiseux import apply_poly, positive_part

DEFAULT_ORACLE_ORDER = 10


@dataclass
class SolveConfig:
    order: int = DEFAULT_ORACLE_ORDER
    verify_order: int = DEFAULT_VERIFY_ORDER
    weight: OrderWeight | None = None
    nterms: int = DEFAULT_TERMS
    jobs: int = 1
    max_size: int = DEFAULT_MAX_SIZE
    max_ext_deg: int = DEFAULT_MAX_EXT_DEG
    max_degree: int = DEFAULT_MAX_DEGREE
    timing: bool = False


class StageError(OrbitSumError):
    """An error raised inside a named pipeline stage."""

    def __init__(self, stage: str, error: Exception):
        self.stage = stage
        self.error = error
        super().__init__(f"{stage}: {type(error).__name__}: {error}")


@dataclass
class Solution:
    status: str  # "True", "Failed"
    stage: str  # last stage reached
    report: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status == "True"


def field_elem_str(e, var="X") -> str:
    """``c0 + c1*X + ...`` with coefficients printed as rational functions."""
    parts = []
    for k, c in enumerate(e.coeffs):
        if not c:
            continue
        s = ratfun_to_str(to_ratfun(c))
        if k:
            mono = var if k == 1 else f"{var}^{k}"
            s = f"({s})*{mono}"
        parts.append(s)
    return " + ".join(parts) if parts else "0"


def eliminant_str(field_, var="X") -> str:
    parts = []
    for k in range(len(field_.eliminant) - 1, -1, -1):
        c = field_.eliminant[k]
        if not c:
            continue
        s = ratfun_to_str(to_ratfun(c))
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if mono:
            s = mono if s == "1" else f"({s})*{mono}"
        parts.append(s)
    out = parts[0]
    for s in parts[1:]:
        out += f" - {s[1:]}" if s.startswith("-") else f" + {s}"
    return out


def kernel_json(k: KernelEquation) -> dict:
    return {
        "unknown": k.unknown,
        "r": k.r,
        "S": str(k.S),
        "rhs": str(k.rhs),
        "sections": [[str(c), str(s)] for c, s in k.sections],
    }


def _layer(p: LaurentPoly, n: int) -> LaurentPoly:
    return p.coeff_in("t", n)


def comparison_table(computed: LaurentPoly, oracle: LaurentPoly, N: int):
    rows = []
    for n in range(N + 1):
        a, b = _layer(computed, n), _layer(oracle, n)
        rows.append({"n": n, "computed": str(a), "oracle": str(b), "match": a == b})
    return rows


def match_line(rows) -> str:
    N = len(rows) - 1
    k = sum(1 for r in rows[1:] if r["match"])
    return f"oracle-match: {k}/{N}"


def recover_unknowns(d: DDE, known: dict, N: int) -> dict:
    """Series of unknowns whose equations only involve already known unknowns."""
    out = {}
    progress = True
    while progress:
        progress = False
        for u in d.unknowns:
            if u in known or u in out:
                continue
            eq = d.equations[u]
            have = {**known, **out}
            if any(tm.unknown not in have for tm in eq.terms):
                continue
            acc = eq.free
            for tm in eq.terms:
                shifted = LaurentPoly.monomial((0, 0, 1), 1, VARS3) * tm.coef
                acc = acc + shifted * delta(have[tm.unknown], tm.k, tm.l)
            out[u] = acc.truncate("t", N)
            progress = True
    return out


def _numerator_coefficients(ose, cert: Certificate, nterms):
    top = max(ose.numerator, default=-1)
    coeffs = []
    for tp in range(top + 1):
        c = ose.numerator.get(tp)
        if c is None or not c.coeffs:
            coeffs.append(LaurentPoly((), ("x", "y")))
        elif c.is_rational():
            f = to_ratfun(c.rational_value())
            coeffs.append(to_laurent(f) if is_laurent(f) else f)
        else:
            coeffs.append(apply_poly(c.coeffs, cert.root, nterms))
    return coeffs


def _numerator_str(ose) -> str:
    parts = []
    for tp in sorted(ose.numerator):
        s = field_elem_str(ose.numerator[tp])
        mono = "" if tp == 0 else ("t" if tp == 1 else f"t^{tp}")
        parts.append(f"({s})" + (f"*{mono}" if mono else ""))
    return " + ".join(parts) if parts else "0"


STAGES = ("kernel", "orbit", "orbit-sum", "certify", "done")


def solve(d: DDE, kernel: KernelEquation | None = None, config: SolveConfig | None = None,
          name: str = "", stop_after: str = "done") -> Solution:
    """Run the pipeline up to ``stop_after`` and collect a JSON-ready report."""
    if stop_after not in STAGES:
        raise ValueError(f"unknown stage {stop_after!r}")
    cfg = config or SolveConfig()
    rep: dict = {"problem": name}
    times = {}

    def timed(label, fn, *args, **kw):
        t0 = time.perf_counter()
        try:
            return fn(*args, **kw)
        except OrbitSumError as exc:
            raise StageError(label, exc) from exc
        finally:
            times[label] = time.perf_counter() - t0

    def finish(status, stage):
        rep["status"] = status
        rep["stage"] = stage
        if cfg.timing:
            rep["timing"] = {k: f"{v:.3f}s" for k, v in times.items()}
        return Solution(status, stage, rep)

    # kernel form
    if kernel is None:
        if len(d.unknowns) != 1:
            raise StageError("kernel", UnsupportedSystem(
                "systems need a kernel block with the eliminated equation"))
        kernel = timed("kernel", to_kernel_form, d)
        verified = timed("kernel", verify_kernel_form, kernel, d, cfg.verify_order)
        source = "derived"
    else:
        verified = timed("kernel", verify_kernel_form, kernel, d, cfg.verify_order)
        source = "given"
    rep["kernel"] = {**kernel_json(kernel), "source": source,
                     "verified": verified, "verify_order": cfg.verify_order}
    if not verified:
        return finish("Failed", "kernel")
    if stop_after == "kernel":
        return finish("True", "kernel")

    N = cfg.order
    u0 = kernel.unknown

    if not kernel.sections:
        # (1 - t^r S) F = rhs has the unique series solution rhs / (1 - t^r S)
        rep["orbit"] = None
        if stop_after in ("orbit", "orbit-sum"):
            return finish("True", stop_after)
        stage = "positive-part"
        rep["orbit_sum"] = None
        rep["certificate"] = {"verdict": "True", "reason": "no sections"}
        if stop_after == "certify":
            return finish("True", stop_after)
        pp = timed(stage, positive_part, kernel.rhs, N, kernel=(kernel.r, kernel.S))
        oracle = timed("oracle", oracle_expand, d, N)
        rep["formula"] = f"{u0} = ({kernel.rhs})/(1 - {_tpow(kernel.r)}*({kernel.S}))"
        return _finish_oracle(rep, d, u0, pp, oracle, N, finish)

    stage = "orbit"
    orbit = timed(stage, compute_orbit, kernel.S, cfg.max_size, cfg.max_ext_deg,
                  max_degree=cfg.max_degree)
    rep["orbit"] = {
        "size": len(orbit),
        "eliminant": eliminant_str(orbit.field),
        "elements": [[field_elem_str(u), field_elem_str(v)] for u, v in orbit.elements],
        "data": orbit.to_json(),
    }
    if stop_after == "orbit":
        return finish("True", stage)

    stage = "orbit-sum"
    eqs = timed(stage, orbit_equations, kernel, orbit)
    basis = timed(stage, section_free_basis, eqs, orbit.field)
    rep["section_free_dimension"] = len(basis)
    ose = timed(stage, normalized_orbit_sum, kernel, orbit, eqs, basis)
    if ose is None:
        rep["orbit_sum"] = None
        rep["diagnostics"] = ("no section-free orbit equation" if not basis
                              else "every section-free orbit equation has zero F-coefficient")
        return finish("Failed", stage)
    rep["orbit_sum"] = {
        **ose.to_json(),
        "weights_text": [field_elem_str(w) for w in ose.weights],
        "numerator_text": _numerator_str(ose),
    }
    if stop_after == "orbit-sum":
        return finish("True", stage)

    stage = "certify"
    C0 = timed(stage, support_cone_bound, d)
    rep["C0"] = C0.to_json()
    ci = input_from_orbit_sum(ose, C0)
    cert = timed(stage, ppe, ci, order=cfg.weight, nterms=cfg.nterms, jobs=cfg.jobs)
    rep["certificate"] = cert.to_json()
    if not cert.verdict:
        rep["diagnostics"] = "no order region and root gave empty supports for all terms"
        return finish("Failed", stage)
    if stop_after == "certify":
        return finish("True", stage)

    rep["formula"] = (f"{u0} = [x^>= y^>=] ({_numerator_str(ose)})"
                      f"/(1 - {_tpow(ose.r)}*({ose.S}))")
    stage = "positive-part"
    coeffs = _numerator_coefficients(ose, cert, cfg.nterms)
    pp = timed(stage, positive_part, coeffs, N, kernel=(ose.r, ose.S), order=cert.order,
               nterms=cfg.nterms)
    oracle = timed("oracle", oracle_expand, d, N)
    return _finish_oracle(rep, d, u0, pp, oracle, N, finish)


def _tpow(r):
    return "t" if r == 1 else f"t^{r}"


def _finish_oracle(rep, d, u0, pp, oracle, N, finish):
    rows = comparison_table(pp, oracle[u0], N)
    rep["oracle"] = {"unknown": u0, "order": N, "table": rows, "summary": match_line(rows)}
    ok = all(r["match"] for r in rows)
    rec = recover_unknowns(d, {u0: pp}, N)
    rep["recovered"] = {}
    for u, ser in rec.items():
        rrows = comparison_table(ser, oracle[u], N)
        ok = ok and all(r["match"] for r in rrows)
        rep["recovered"][u] = {"table": rrows, "summary": match_line(rrows)}
    if not ok:
        rep["diagnostics"] = "positive part disagrees with the series oracle"
        return finish("Failed", "oracle")
    return finish("True", "done")


def render_text(rep: dict) -> str:
    """Human-readable rendering of a solution report."""
    lines = [f"problem: {rep.get('problem', '')}"]
    k = rep.get("kernel")
    if k:
        lines.append(f"kernel: (1 - {_tpow(k['r'])}*({k['S']})) {k['unknown']} = {k['rhs']}"
                     + "".join(f" + ({c})*{s}" for c, s in k["sections"]))
        lines.append(f"kernel verified to t^{k['verify_order']}: {k['verified']}")
    o = rep.get("orbit")
    if o:
        lines.append(f"orbit size: {o['size']}")
        lines.append(f"m(X) = {o['eliminant']}")
        for u, v in o["elements"]:
            lines.append(f"  ({u}, {v})")
    if "section_free_dimension" in rep:
        lines.append(f"section-free dimension: {rep['section_free_dimension']}")
    s = rep.get("orbit_sum")
    if s:
        lines.append("weights:")
        for w in s["weights_text"]:
            lines.append(f"  {w}")
        lines.append(f"numerator: {s['numerator_text']}")
    c = rep.get("certificate")
    if c:
        lines.append(f"certificate: {c['verdict']}")
        if c.get("order"):
            lines.append(f"  region {c['region_index']}, root {c['root_index']}")
    if rep.get("formula"):
        lines.append(f"solution: {rep['formula']}")
    orc = rep.get("oracle")
    if orc:
        lines.append(f"{orc['unknown']} {orc['summary']}")
        for u, r in rep.get("recovered", {}).items():
            lines.append(f"{u} (recovered) {r['summary']}")
    if rep.get("diagnostics"):
        lines.append(f"diagnostics: {rep['diagnostics']}")
    lines.append(f"status: {rep['status']} (stage {rep['stage']})")
    if rep.get("timing"):
        lines.append("timing: " + ", ".join(f"{k} {v}" for k, v in rep["timing"].items()))
    return "\n".join(lines) + "\n"
