"""Command-line driver: parse a problem instance, run a named computation or
verification suite, and emit a machine-readable JSON report on stdout (human
summary on stderr).

Exit codes: 0 all metrics within tolerance, 1 some metric failed, 2 bad input
or internal error.  With a fixed seed the report is byte-identical across runs
once the timestamp is suppressed (--no-timestamp).
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from . import apparent as app_mod
from . import stability as stab_mod
from . import symplectic as symp_mod
from .curve import Curve, Divisor, basis_forms, constant_term_of_form, make_curve, \
    random_divisor, residue_of_form
from .errors import EllconnError, ParseError, ValidationError
from .fuchs import (
    EigenData,
    ParPoint,
    chart_connection,
    check_apparent,
    lambda_transition_matrix,
    par,
    par_inverse,
    splitting_check,
    transition_map,
    transition_map_inverse,
)

DEFAULT_TOLS = {
    "residue": 1e-9,
    "apparent": 1e-8,
    "roundtrip_point": 1e-9,
    "roundtrip_system": 1e-8,
    "splitting": 1e-9,
    "matrix": 1e-12,
    "symplectic_fd": 1e-6,
    "serre": 1e-8,
    "sum": 1e-12,
    "linearity": 1e-9,
}

KNOWN_FIELDS = {"lambda", "points", "nu", "seed", "tolerances"}


class Instance:
    """Validated problem instance."""

    def __init__(self, lam, points, nu, seed, tolerances):
        self.curve = make_curve(lam)
        self.points = points
        self.divisor = Divisor.reduced(points)
        self.nu = nu
        self.seed = seed
        self.tol = dict(DEFAULT_TOLS)
        self.tol.update(tolerances)

    @property
    def n(self) -> int:
        return len(self.points)


def _as_complex(v, where: str) -> complex:
    if not (isinstance(v, (list, tuple)) and len(v) == 2):
        raise ParseError(f"{where}: complex scalars are two-element arrays [re, im]")
    return complex(float(v[0]), float(v[1]))


def load_instance(doc: dict, seed_override=None, tol_overrides=None) -> Instance:
    if not isinstance(doc, dict):
        raise ParseError("instance document must be a JSON object")
    unknown = set(doc) - KNOWN_FIELDS
    if unknown:
        raise ParseError(f"unknown fields {sorted(unknown)}")
    for fieldname in ("lambda", "points", "nu"):
        if fieldname not in doc:
            raise ParseError(f"missing field {fieldname!r}")
    lam = _as_complex(doc["lambda"], "lambda")
    try:
        curve = make_curve(lam)
    except EllconnError as exc:
        raise ValidationError(str(exc)) from exc
    points = []
    for i, entry in enumerate(doc["points"]):
        if not isinstance(entry, dict) or set(entry) != {"x", "y"}:
            raise ParseError(f"points[{i}] must be an object with fields x, y")
        x = _as_complex(entry["x"], f"points[{i}].x")
        y = _as_complex(entry["y"], f"points[{i}].y")
        try:
            points.append(curve.point(x, y))
        except ValueError as exc:
            raise ValidationError(f"points[{i}]: {exc}") from exc
    # pairwise distinct, and clear of the Weierstrass x's by margin
    for i, pt in enumerate(points):
        if min(abs(pt.x), abs(pt.x - 1.0), abs(pt.x - lam)) <= 1e-6:
            raise ValidationError(
                f"points[{i}] violates the reduced-divisor margin at a 2-torsion point")
        for k in range(i):
            if abs(pt.x - points[k].x) <= 1e-6 and abs(pt.y - points[k].y) <= 1e-6:
                raise ValidationError(f"points[{i}] and points[{k}] coincide")
    nu_pairs = []
    for i, entry in enumerate(doc["nu"]):
        if not (isinstance(entry, (list, tuple)) and len(entry) == 2):
            raise ParseError(f"nu[{i}] must be a pair of complex scalars")
        nu_pairs.append((_as_complex(entry[0], f"nu[{i}][0]"),
                         _as_complex(entry[1], f"nu[{i}][1]")))
    if len(nu_pairs) != len(points):
        raise ValidationError("nu must list one exponent pair per point")
    seed = doc.get("seed", 0)
    if not isinstance(seed, int) or seed < 0 or seed >= 2 ** 64:
        raise ParseError("seed must be an unsigned 64-bit integer")
    if seed_override is not None:
        seed = seed_override
    tols = doc.get("tolerances", {})
    if not isinstance(tols, dict):
        raise ParseError("tolerances must be a map")
    for k in tols:
        if k not in DEFAULT_TOLS:
            raise ParseError(f"unknown tolerance {k!r}")
    merged = {k: float(v) for k, v in tols.items()}
    merged.update(tol_overrides or {})
    return Instance(lam, points, EigenData.of(nu_pairs), seed, merged)


def require_fuchs(inst: Instance) -> None:
    if inst.nu.fuchs_defect() > 1e-9:
        raise ValidationError(
            f"exponents violate the trace-residue (Fuchs) relation "
            f"by {inst.nu.fuchs_defect():.3e}")


# ---------------------------------------------------------------------------
# report assembly
# ---------------------------------------------------------------------------

def _num(z) -> list[float] | float:
    z = complex(z)
    if z.imag == 0.0:
        return float(z.real)
    return [z.real, z.imag]


class Report:
    def __init__(self, command: str):
        self.command = command
        self.metrics: list[dict] = []
        self.artifacts: dict = {}

    def metric(self, name: str, value: float, tolerance: float) -> None:
        self.metrics.append({
            "name": name,
            "value": float(value),
            "tolerance": float(tolerance),
            "passed": bool(value <= tolerance),
        })

    @property
    def status(self) -> str:
        return "pass" if all(m["passed"] for m in self.metrics) else "fail"

    def to_json(self, timestamp: bool) -> str:
        doc = {
            "command": self.command,
            "status": self.status,
            "metrics": self.metrics,
            "artifacts": self.artifacts,
        }
        if timestamp:
            doc["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
        return json.dumps(doc, indent=2, sort_keys=True)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_residue_table(inst: Instance, rep: Report, args) -> None:
    curve, D = inst.curve, inst.divisor
    forms = basis_forms(curve, D)
    lam = curve.lam
    w0, w1, wl = curve.weierstrass_points()
    tol = inst.tol["residue"]
    # residues: rows (form, point, expected)
    checks = [("phi0", forms[1], w1, 1.0), ("phi0", forms[1], wl, -1.0),
              ("phi0", forms[1], w0, 0.0),
              ("phi1", forms[2], w0, 1.0), ("phi1", forms[2], wl, -1.0),
              ("phi1", forms[2], w1, 0.0)]
    for j, (pt, _) in enumerate(D.points, start=1):
        checks += [(f"theta{j}", forms[2 + j], pt, 1.0),
                   (f"theta{j}", forms[2 + j], w0, -1.0),
                   (f"theta{j}", forms[2 + j], w1, 0.0),
                   (f"theta{j}", forms[2 + j], wl, 0.0)]
    for name, h, pt, want in checks:
        got = residue_of_form(h, curve, pt)
        rep.metric(f"residue-{name}-at-{_point_label(curve, pt)}", abs(got - want), tol)
    # constant terms of omega/dtau at the three half-period points
    for pt, want in ((w0, 1.0 / lam), (w1, 1.0 / (1.0 - lam)),
                     (wl, 1.0 / (lam * (lam - 1.0)))):
        got = constant_term_of_form(forms[0], curve, pt)
        rep.metric(f"omega-constant-at-{_point_label(curve, pt)}", abs(got - want), tol)
    # theta constant terms (dy-coefficients; the w1/wlam tables are normalized
    # by p'(a), see the basis documentation)
    for j, (pt, _) in enumerate(D.points, start=1):
        xj, yj = pt.x, pt.y
        table = [
            (w0, -yj / (lam * xj)),
            (w1, xj * (xj - lam) / (yj * (lam - 1.0))),
            (wl, -xj * (xj - 1.0) / (yj * lam * (lam - 1.0))),
        ]
        for wpt, want in table:
            got = constant_term_of_form(forms[2 + j], curve, wpt)
            rep.metric(f"theta{j}-constant-at-{_point_label(curve, wpt)}",
                       abs(got - want), tol)


def _point_label(curve: Curve, pt) -> str:
    if abs(pt.y) > 1e-8:
        return f"t({pt.x:.3g})"
    if abs(pt.x) < 1e-8:
        return "w0"
    if abs(pt.x - 1.0) < 1e-8:
        return "w1"
    if abs(pt.x - curve.lam) < 1e-8:
        return "wlam"
    return f"({pt.x:.3g})"


def _random_residues(n: int, rng) -> list[np.ndarray]:
    out = []
    for _ in range(n):
        a, b, g = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        out.append(np.array([[a, b], [g, -a]]))
    return out


def cmd_build(inst: Instance, rep: Report, args) -> None:
    require_fuchs(inst)
    rng = np.random.default_rng(inst.seed)
    from .fuchs import build_system
    sys = build_system(inst.curve, inst.divisor, _random_residues(inst.n, rng))
    rep.metric("coefficient-traces", sys.max_trace(), 1e-12)
    rep.artifacts["system"] = _system_doc(sys)
    for wpt in inst.curve.weierstrass_points():
        r = check_apparent(sys, wpt)
        rep.metric(f"apparent-at-{_point_label(inst.curve, wpt)}",
                   max(r.eigenvalue_defect, r.eigenspace_defect, r.invariance_defect),
                   inst.tol["apparent"])


def _system_doc(sys) -> dict:
    def mat(M):
        return [[_num(M[0, 0]), _num(M[0, 1])], [_num(M[1, 0]), _num(M[1, 1])]]
    return {
        "scale": _num(sys.scale),
        "phi0": mat(sys.A_phi0),
        "phi1": mat(sys.A_phi1),
        "omega": mat(sys.A_omega),
        "theta": [mat(B) for B in sys.B],
    }


def cmd_check_apparent(inst: Instance, rep: Report, args) -> None:
    cmd_build(inst, rep, args)


def cmd_par(inst: Instance, rep: Report, args) -> None:
    require_fuchs(inst)
    rng = np.random.default_rng(inst.seed)
    pp = ParPoint.random(inst.n, rng)
    sys = par_inverse(inst.curve, inst.divisor, inst.nu, pp)
    back = par(sys, inst.nu)
    rep.metric("eigendirection-roundtrip", pp.max_distance(back),
               inst.tol["roundtrip_point"])
    rep.artifacts["directions"] = [[[_num(v[0]), _num(v[1])] for v in pair]
                                   for pair in pp.directions]


def cmd_par_inverse(inst: Instance, rep: Report, args) -> None:
    require_fuchs(inst)
    rng = np.random.default_rng(inst.seed)
    from .fuchs import build_system
    trials = max(1, args.trials // 10)
    worst = 0.0
    for _ in range(trials):
        pp = ParPoint.random(inst.n, rng)
        sys = par_inverse(inst.curve, inst.divisor, inst.nu, pp)
        sys2 = par_inverse(inst.curve, inst.divisor, inst.nu, par(sys, inst.nu))
        worst = max(worst, sys.deviation(sys2))
    rep.metric("system-roundtrip", worst, inst.tol["roundtrip_system"])


def cmd_transition(inst: Instance, rep: Report, args) -> None:
    rng = np.random.default_rng(inst.seed)
    worst = 0.0
    for _ in range(args.trials):
        w = rng.standard_normal(inst.n) + 1j * rng.standard_normal(inst.n)
        s = rng.standard_normal(inst.n) + 1j * rng.standard_normal(inst.n)
        z, r = transition_map(inst.nu, w, s)
        w2, s2 = transition_map_inverse(inst.nu, z, r)
        worst = max(worst, float(np.max(np.abs(w2 - w))), float(np.max(np.abs(s2 - s))))
    rep.metric("transition-roundtrip", worst, inst.tol["matrix"])


def cmd_splitting(inst: Instance, rep: Report, args) -> None:
    require_fuchs(inst)
    rng = np.random.default_rng(inst.seed)
    trials = max(1, args.trials // 10)
    worst_split = worst_chart = 0.0
    for _ in range(trials):
        w = _nonzero_sample(rng, inst.n)
        s = rng.standard_normal(inst.n) + 1j * rng.standard_normal(inst.n)
        worst_split = max(worst_split,
                          splitting_check(inst.curve, inst.divisor, inst.nu, w))
        worst_chart = max(worst_chart,
                          splitting_check(inst.curve, inst.divisor, inst.nu, w, s))
    rep.metric("splitting-cocycle", worst_split, inst.tol["splitting"])
    rep.metric("chart-identity", worst_chart, inst.tol["splitting"])


def _nonzero_sample(rng, n: int, floor: float = 0.1) -> np.ndarray:
    w = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    small = np.abs(w) < floor
    w[small] = w[small] / np.abs(w[small]) * floor if np.any(small) else w[small]
    return w


def cmd_lambda_matrix(inst: Instance, rep: Report, args) -> None:
    rng = np.random.default_rng(inst.seed)
    worst_affine = worst_higgs = worst_det = 0.0
    for _ in range(args.trials):
        w = _nonzero_sample(rng, inst.n)
        s = rng.standard_normal(inst.n) + 1j * rng.standard_normal(inst.n)
        T = lambda_transition_matrix(inst.nu, w)
        _, r = transition_map(inst.nu, w, s)
        affine = T @ np.concatenate([[1.0 + 0.0j], s])
        worst_affine = max(worst_affine, float(np.max(np.abs(affine[1:] - r))),
                           abs(affine[0] - 1.0))
        higgs = T @ np.concatenate([[0.0 + 0.0j], s])
        worst_higgs = max(worst_higgs,
                          float(np.max(np.abs(higgs[1:] - w * w * s))), abs(higgs[0]))
        worst_det = max(worst_det,
                        abs(np.linalg.det(T) - np.prod(w * w)) / abs(np.prod(w * w)))
    rep.metric("pencil-transition-affine", worst_affine, inst.tol["matrix"])
    rep.metric("pencil-transition-higgs-boundary", worst_higgs, inst.tol["matrix"])
    rep.metric("pencil-transition-determinant", worst_det, 1e-10)


def cmd_symplectic(inst: Instance, rep: Report, args) -> None:
    rng = np.random.default_rng(inst.seed)
    n = inst.n
    sub = args.sub or "all"
    if sub in ("darboux", "all"):
        worst = 0.0
        for _ in range(args.trials):
            w = _nonzero_sample(rng, n)
            s = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            pt = symp_mod.ChartPoint("Uinf", w, s)
            t1 = symp_mod.TangentVector.random("Uinf", n, rng)
            t2 = symp_mod.TangentVector.random("Uinf", n, rng)
            pulled = symp_mod.pullback_two_form(
                symp_mod.transition_chart_map(inst.nu), pt, t1, t2, "darboux_u0")
            direct = symp_mod.two_form_eval("darboux_uinf", pt, t1, t2)
            worst = max(worst, abs(pulled - direct) / max(1.0, abs(direct)))
        rep.metric("transition-pullback-darboux", worst, inst.tol["symplectic_fd"])
        worst = 0.0
        for _ in range(args.trials):
            z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            r = _nonzero_sample(rng, n)
            pt = symp_mod.ChartPoint("U0", z, r)
            t1 = symp_mod.TangentVector.random("U0", n, rng)
            t2 = symp_mod.TangentVector.random("U0", n, rng)
            pulled = symp_mod.pullback_two_form(
                symp_mod.eigenspace_chart_map(inst.nu), pt, t1, t2, "omega_nu",
                nu=inst.nu)
            direct = symp_mod.two_form_eval("darboux_u0", pt, t1, t2)
            worst = max(worst, abs(pulled - direct) / max(1.0, abs(direct)))
        rep.metric("eigenspace-pullback-darboux", worst, inst.tol["symplectic_fd"])
    if sub in ("omega-nu", "all"):
        worst = 0.0
        for _ in range(args.trials):
            t1 = symp_mod.TangentVector.random("Sn", n, rng)
            t2 = symp_mod.TangentVector.random("Sn", n, rng)
            z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            zeta = z + _nonzero_sample(rng, n)
            pt = symp_mod.sn_point(z, zeta)
            v = symp_mod.two_form_eval("omega_nu", pt, t1, t2, nu=inst.nu)
            w = symp_mod.two_form_eval("omega_nu", pt, t2, t1, nu=inst.nu)
            worst = max(worst, abs(v + w))
        rep.metric("antisymmetry-omega-nu", worst, 1e-12)
    if sub in ("serre", "all"):
        z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        M = np.array([[symp_mod.serre_pairing_residue(inst.curve, inst.divisor, k, j, z)
                       for j in range(n)] for k in range(n)])
        rep.metric("residue-pairing-identity",
                   float(np.max(np.abs(M - np.eye(n)))), inst.tol["serre"])
    if sub in ("moebius", "all"):
        worst = 0.0
        for _ in range(max(1, args.trials // 5)):
            sigma = rng.permutation(n)
            maps = [symp_mod.Moebius.random(rng) for _ in range(n)]
            z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            zeta = z + _nonzero_sample(rng, n)
            pt = symp_mod.sn_point(z, zeta)
            t1 = symp_mod.TangentVector.random("Sn", n, rng)
            t2 = symp_mod.TangentVector.random("Sn", n, rng)
            try:
                before, after = symp_mod.mobius_transport(sigma, maps, pt, t1, t2, inst.nu)
            except EllconnError:
                continue  # image too close to the diagonal; resample
            worst = max(worst, abs(before - after) / max(1.0, abs(before)))
        rep.metric("moebius-invariance", worst, inst.tol["symplectic_fd"])


def cmd_stability(inst: Instance, rep: Report, args) -> None:
    rng = np.random.default_rng(inst.seed)
    n = inst.n
    sub = args.sub or "all"
    if sub in ("stab", "all"):
        # the never-semistable configuration has value -n + sum(mu) < 0; realized
        # as a stability value (degree (n+1)/2 subbundle) only for odd n
        worst = -float("inf")
        for _ in range(args.trials):
            mu = stab_mod.WeightVector(rng.uniform(1e-6, 1 - 1e-6, n))
            if n % 2 == 1:
                v = stab_mod.stab_value(1, (n + 1) // 2, set(), mu)
            else:
                v = -n + float(mu.mu.sum())
            worst = max(worst, v)
        rep.metric("destabilizing-value-negative", worst, 0.0)
    if sub in ("chamber", "all"):
        bad = 0
        for _ in range(args.trials):
            mu = _sample_base_chamber(rng, n)
            if not stab_mod.chamber_membership(mu, frozenset()):
                bad += 1
        rep.metric("base-chamber-membership", float(bad), 0.0)
    if sub in ("phi", "all"):
        # 1 - (1 - mu) re-rounds once for mu < 1/2, so "exact" means one ulp of 1
        worst = 0.0
        for _ in range(args.trials):
            I = _random_even_subset(rng, n)
            mu = stab_mod.WeightVector(rng.uniform(1e-6, 1 - 1e-6, n))
            back = stab_mod.phi_I(stab_mod.phi_I(mu, I), I)
            worst = max(worst, float(np.max(np.abs(back.mu - mu.mu))))
        rep.metric("weight-involution", worst, 2.0 ** -52)
    if sub in ("elm", "all"):
        worst_sum = worst_inv = 0.0
        for _ in range(args.trials):
            nu = EigenData.random_fuchs(n, rng)
            I = _random_even_subset(rng, n)
            eps = stab_mod.SignVector.of([1 if rng.random() < 0.5 else -1
                                          for _ in range(n)])
            out = stab_mod.elm_eigenvalues(nu, I, eps)
            worst_sum = max(worst_sum, abs(np.sum(out.plus) + np.sum(out.minus)
                                           - np.sum(nu.plus) - np.sum(nu.minus)))
            back = stab_mod.elm_eigenvalues(out, I, eps)
            worst_inv = max(worst_inv,
                            float(np.max(np.abs(back.plus - nu.plus))),
                            float(np.max(np.abs(back.minus - nu.minus))))
        rep.metric("exponent-shift-sum", worst_sum, inst.tol["sum"])
        rep.metric("exponent-shift-involution", worst_inv, inst.tol["sum"])
    if sub in ("genericity", "all"):
        g = stab_mod.genericity_report(inst.nu)
        rep.metric("genericity-fuchs", 0.0 if g.fuchs_ok else 1.0, 0.5)
        rep.artifacts["genericity"] = {
            "fuchs_ok": g.fuchs_ok, "no_integer_sums": g.no_integer_sums,
            "distinct_pairs": g.distinct_pairs, "strong_condition": g.strong_condition,
        }
    if sub in ("zn", "all") and n % 2 == 1:
        p_plus, p_minus = stab_mod.zn_directions(inst.nu)
        rep.metric("unstable-locus-plus-direction",
                   float(abs(p_plus[0] - p_plus[1])), 0.0)
        rep.artifacts["unstable_directions"] = {
            "plus": [_num(p_plus[0]), _num(p_plus[1])],
            "minus": [_num(p_minus[0]), _num(p_minus[1])],
        }
    if sub in ("lame", "all"):
        nu1 = inst.nu.pairs[0][0]
        if not stab_mod.is_integer(nu1):
            th = stab_mod.lame_theta(nu1)
            rep.metric("sphere-exponent-defining-relation",
                       abs(th[3][0] + th[3][1] + 1.0), 1e-12)
            rep.artifacts["sphere_exponents"] = [[_num(a), _num(b)] for a, b in th]


def _sample_base_chamber(rng, n: int) -> "stab_mod.WeightVector":
    while True:
        mu = rng.uniform(1e-6, 1 - 1e-6, n)
        if mu.sum() < 1.0 - 1e-9:
            return stab_mod.WeightVector(mu)


def _random_even_subset(rng, n: int) -> frozenset[int]:
    while True:
        I = frozenset(int(k) + 1 for k in range(n) if rng.random() < 0.5)
        if len(I) % 2 == 0:
            return I


def cmd_app(inst: Instance, rep: Report, args) -> None:
    require_fuchs(inst)
    rng = np.random.default_rng(inst.seed)
    n = inst.n
    sub = args.sub or "all"
    if sub in ("defined", "all"):
        defined = app_mod.app_defined(inst.nu)
        rep.artifacts["app_defined"] = defined
        sums = stab_mod.sign_sums(inst.nu)
        brute = bool(np.min(np.abs(sums)) > 1e-8)
        rep.metric("morphism-criterion-consistency",
                   0.0 if defined == brute else 1.0, 0.5)
    if sub in ("eval", "all"):
        samples = app_mod.sample_points(inst.curve, inst.divisor, n + 2)
        z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        sysA = chart_connection(inst.curve, inst.divisor, inst.nu, "U0", z,
                                rng.standard_normal(n), scale=1.0)
        sysB = chart_connection(inst.curve, inst.divisor, inst.nu, "U0", z,
                                rng.standard_normal(n), scale=0.0)
        a, b = complex(1.25, -0.5), complex(-0.75, 0.25)
        lhs = app_mod.app_eval(a * sysA + b * sysB, samples)
        rhs = a * app_mod.app_eval(sysA, samples) + b * app_mod.app_eval(sysB, samples)
        rel = float(np.max(np.abs(lhs - rhs)) / max(1.0, float(np.max(np.abs(rhs)))))
        rep.metric("evaluation-linearity", rel, inst.tol["linearity"])
    if sub in ("fiber-rank", "all"):
        mismatches = 0
        trials = max(1, args.trials // 10)
        for _ in range(trials):
            z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            mrank, expected = app_mod.fiber_rank_app(inst.curve, inst.divisor,
                                                     inst.nu, z)
            if mrank != expected:
                mismatches += 1
        rep.metric("fiber-rank-agreement", float(mismatches), 0.0)
        rep.artifacts["fiber_rank_trials"] = trials


def cmd_suite(inst: Instance, rep: Report, args) -> None:
    cmd_residue_table(inst, rep, args)
    cmd_build(inst, rep, args)
    cmd_par(inst, rep, args)
    cmd_par_inverse(inst, rep, args)
    cmd_transition(inst, rep, args)
    cmd_splitting(inst, rep, args)
    cmd_lambda_matrix(inst, rep, args)
    cmd_symplectic(inst, rep, args)
    cmd_stability(inst, rep, args)
    cmd_app(inst, rep, args)


COMMANDS = {
    "residue-table": cmd_residue_table,
    "build": cmd_build,
    "check-apparent": cmd_check_apparent,
    "par": cmd_par,
    "par-inverse": cmd_par_inverse,
    "transition": cmd_transition,
    "splitting": cmd_splitting,
    "lambda-matrix": cmd_lambda_matrix,
    "symplectic": cmd_symplectic,
    "stability": cmd_stability,
    "app": cmd_app,
    "suite": cmd_suite,
}


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ellconn",
        description="verification toolkit for rank-2 Fuchsian systems on elliptic curves",
    )
    ap.add_argument("--command", required=True, choices=sorted(COMMANDS))
    ap.add_argument("--input", required=True, help="path to a JSON problem instance")
    ap.add_argument("--seed", type=int, default=None, help="override the instance seed")
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--tol", action="append", default=[], metavar="NAME=VALUE")
    ap.add_argument("--sub", default=None,
                    help="sub-check for symplectic/stability/app (default: all)")
    ap.add_argument("--no-timestamp", action="store_true")
    ap.add_argument("--quiet", action="store_true")
    return ap


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        tol_overrides = {}
        for spec in args.tol:
            if "=" not in spec:
                raise ParseError(f"--tol expects NAME=VALUE, got {spec!r}")
            name, value = spec.split("=", 1)
            if name not in DEFAULT_TOLS:
                raise ParseError(f"unknown tolerance {name!r}")
            tol_overrides[name] = float(value)
        try:
            with open(args.input, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise ParseError(f"cannot read {args.input}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from exc
        inst = load_instance(doc, seed_override=args.seed, tol_overrides=tol_overrides)
        rep = Report(args.command)
        COMMANDS[args.command](inst, rep, args)
    except (ParseError, ValidationError) as exc:
        print(json.dumps({"status": "error", "error": str(exc)}, indent=2))
        if not args.quiet:
            print(f"error: {exc}", file=sys.stderr)
        return 2
    except EllconnError as exc:
        print(json.dumps({"status": "error", "error": str(exc)}, indent=2))
        if not args.quiet:
            print(f"error: {exc}", file=sys.stderr)
        return 2
    print(rep.to_json(timestamp=not args.no_timestamp))
    if not args.quiet:
        failed = [m["name"] for m in rep.metrics if not m["passed"]]
        summary = (f"{rep.command}: {rep.status} "
                   f"({len(rep.metrics) - len(failed)}/{len(rep.metrics)} metrics)")
        if failed:
            summary += "; failed: " + ", ".join(failed)
        print(summary, file=sys.stderr)
    return 0 if rep.status == "pass" else 1


if __name__ == "__main__":
    sys.exit(main())
