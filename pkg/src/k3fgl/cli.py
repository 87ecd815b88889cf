"""Command-line interface: one NDJSON document per result on standard output.

Every document has the envelope {schema, command, params, seed, result,
evidence, meta}.  Only ``meta`` (timestamp, timing, cache hit) varies
between identical runs.

Exit codes: 0 success, 1 computational failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone
from typing import Callable

from . import charsum, fgl, hyperfam, weil
from .exact import DomainError, fp_factor, fp_gcd, is_prime, primes_below
from .hyperfam import CATALOG, IntegralityError, get_family
from .padic import PrecisionError, teichmuller, vp
from .store import SCHEMA, ResultStore, RunConfig, canonical_json, content_key, load_config

COMPUTATIONAL_ERRORS = (fgl.CongruenceViolation, fgl.IdentityViolation, fgl.DivisibilityViolation,
                        IntegralityError, PrecisionError)


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# argument helpers


def _params(text: str | None) -> dict[str, int]:
    if not text:
        return {}
    out = {}
    for item in text.split(","):
        if "=" not in item:
            raise UsageError(f"bad parameter {item!r}; use name=value")
        k, v = item.split("=", 1)
        try:
            out[k.strip()] = int(v)
        except ValueError:
            raise UsageError(f"parameter {k} needs an integer") from None
    return out


def _int_list(text: str) -> list[int]:
    try:
        val = json.loads(text)
    except json.JSONDecodeError:
        val = [x for x in text.replace(",", " ").split()]
    try:
        return [int(x) for x in val]
    except (TypeError, ValueError):
        raise UsageError(f"expected a list of integers, got {text!r}") from None


def _family(fid: str):
    try:
        return get_family(fid)
    except DomainError as exc:
        raise UsageError(str(exc)) from None


def _prime(p: int, spec=None) -> int:
    if not is_prime(p):
        raise UsageError(f"{p} is not prime")
    if spec is not None and p < spec.min_prime:
        raise UsageError(f"p = {p} is outside the support of {spec.id} (p >= {spec.min_prime})")
    return p


def _family_params(spec, given: dict[str, int]) -> dict[str, int]:
    unknown = set(given) - set(spec.params)
    if unknown:
        raise UsageError(f"{spec.id} has no parameters {sorted(unknown)}; "
                         f"expected {list(spec.params)}")
    return {k: given.get(k, 1) for k in spec.params}


# ---------------------------------------------------------------------------
# commands: each returns (params, result, evidence)


def cmd_families(args, cfg):
    return {}, [s.descriptor() for s in CATALOG.values()], {"count": len(CATALOG)}


def cmd_log_coeffs(args, cfg):
    spec = _family(args.family)
    p = _prime(args.p)
    params = _family_params(spec, _params(args.params))
    log = fgl.FormalGroupLogarithm.for_family(spec, params, p, cfg.N)
    coeffs = [log.coeff(m).value for m in range(args.count)]
    evidence = {}
    if spec.kind != "elliptic":
        lifted = {k: v for k, v in log.provenance["params"].items()}
        ints = {k: teichmuller(v, p, cfg.N).value for k, v in lifted.items()}
        oracle = [hyperfam.multinomial_oracle(spec, ints, m) % p ** cfg.N
                  for m in range(min(args.count, 8))]
        evidence["oracle_prefix_agrees"] = oracle == coeffs[: len(oracle)]
    return ({"family": spec.id, "p": p, "params": params, "count": args.count, "N": cfg.N},
            {"stride": spec.stride, "modulus": f"{p}^{cfg.N}", "coeffs": coeffs}, evidence)


def cmd_group_law(args, cfg):
    spec = _family(args.family)
    p = _prime(args.p)
    params = _family_params(spec, _params(args.params))
    D = cfg.D
    need = fgl.group_law_precision(p, cfg.N, D)
    log = fgl.FormalGroupLogarithm.for_family(spec, params, p, need)
    G = fgl.build_group_law(log, D, cfg.N)
    axioms = fgl.check_group_axioms(G)
    coeffs = {f"{i},{j}": c.value for (i, j), c in G.as_dict().items()}
    if not all(axioms.values()):
        raise fgl.IdentityViolation(f"group axioms failed: {axioms}")
    return ({"family": spec.id, "p": p, "params": params, "D": D, "N": cfg.N},
            {"modulus": f"{p}^{cfg.N}", "coefficients": coeffs},
            {"axioms": axioms, "coefficient_precision": need})


def cmd_height(args, cfg):
    spec = _family(args.family)
    p = _prime(args.p, spec)
    N = max(cfg.N, cfg.s_max)
    if args.x is not None:
        log = fgl.FormalGroupLogarithm.for_x_line(spec, args.x, p, N)
        params = {"x": args.x % p}
    else:
        params = _family_params(spec, _params(args.params))
        log = fgl.FormalGroupLogarithm.for_family(spec, params, p, N)
    rep = fgl.height_classify(log, cfg.s_max)
    return ({"family": spec.id, "p": p, "params": params, "s_max": cfg.s_max},
            {"classification": rep.label()}, rep.evidence)


def _v_polys_payload(spec, p):
    V1, V2 = fgl.v_polynomials(spec, p)
    g = fp_gcd(V1, V2)
    return V1, V2, g


def cmd_v_polys(args, cfg):
    spec = _family(args.family)
    p = _prime(args.p, spec)
    try:
        V1, V2, g = _v_polys_payload(spec, p)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    result = {"V1": list(V1.coeffs), "V2": list(V2.coeffs), "V1_str": str(V1),
              "gcd": list(g.coeffs), "gcd_trivial": g.degree == 0}
    evidence = {"V1_roots": V1.roots()}
    if args.factor:
        fac = fp_factor(V2, seed=cfg.seed)
        result["V2_factorization"] = {
            "unit": fac.unit, "seed": fac.seed,
            "factors": [{"poly": list(f.coeffs), "str": str(f), "mult": m} for f, m in fac.factors],
            "degrees": fac.degrees()}
        evidence["roundtrip"] = fac.expand() == V2
    return {"family": spec.id, "p": p}, result, evidence


def cmd_unit_root(args, cfg):
    spec = _family(args.family)
    p = _prime(args.p, spec)
    s_max = args.s or min(cfg.s_max, 2)
    N = max(cfg.N, s_max + 2)
    if args.x is not None:
        log = fgl.FormalGroupLogarithm.for_x_line(spec, args.x, p, N)
        params = {"x": args.x % p}
    else:
        params = _family_params(spec, _params(args.params))
        log = fgl.FormalGroupLogarithm.for_family(spec, params, p, N)
    rep = fgl.unit_root_sb(log, s_max, cfg.mu_max)
    stable, a, b = fgl.alpha_stable(log, s_max)
    out = rep.to_json()
    witnesses = out.pop("witnesses")
    return ({"family": spec.id, "p": p, "params": params, "s_max": s_max, "mu_max": cfg.mu_max},
            out, {"witnesses": witnesses, "stable_next_level": stable, "alpha_next": b.value})


def cmd_gamma_check(args, cfg):
    p = _prime(args.p)
    N = args.N or cfg.N
    try:
        rep = fgl.gamma_check(p, N)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    if not rep["equal"]:
        raise fgl.IdentityViolation(f"gamma identity fails: {rep}")
    return {"p": p, "N": N}, {"equal": rep["equal"], "alpha": rep["alpha"],
                              "gamma_side": rep["gamma_side"]}, {"modulus": f"{p}^{N}"}


def cmd_newton(args, cfg):
    coeffs = _int_list(args.coeffs)
    np_ = weil.newton_polygon(coeffs, _prime(args.p))
    return {"coeffs": coeffs, "p": args.p}, np_.to_json(), {
        "points": [[i, vp(c, args.p)] for i, c in enumerate(coeffs) if c]}


def cmd_slope_factor(args, cfg):
    coeffs = _int_list(args.coeffs)
    p = _prime(args.p)
    N = args.N or 6
    try:
        wp = weil.WeilPoly(tuple(coeffs), p, args.a)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    sf = weil.slope_factorize(wp, N=N)
    evidence = {}
    if len(sf.lt) == len(sf.gt):
        evidence["functional_equation"] = weil.functional_equation_check(sf)
    return {"coeffs": coeffs, "p": p, "a": args.a, "N": N}, sf.to_json(), evidence


def cmd_power_structure(args, cfg):
    coeffs = _int_list(args.coeffs)
    ps = weil.power_structure(coeffs)
    return {"coeffs": coeffs}, {"Q": list(ps.Q), "r": ps.r, "irreducibility": ps.verdict}, \
        ps.evidence


def cmd_r_table(args, cfg):
    try:
        if args.tau is not None and args.h is not None:
            return {"tau": args.tau, "h": args.h}, {"r": sorted(weil.possible_r(args.tau, args.h))}, {}
        table = weil.r_table(args.tau or 20)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    cells = sum(len(row) for row in table.values())
    return ({"tau_max": args.tau or 20},
            {"table": {str(t): {str(h): r for h, r in row.items()} for t, row in table.items()}},
            {"cells": cells})


def cmd_congruence_check(args, cfg):
    spec = _family(args.family)
    p = _prime(args.p, spec)
    params = _family_params(spec, _params(args.params))
    if args.kind == "limit":
        rep = fgl.limit_identity_check(spec, params, p, args.N or cfg.N)
        return {"family": spec.id, "p": p, "params": params, "kind": "limit"}, rep, {}
    if args.kind == "supersingular":
        try:
            rep = fgl.supersingular_divisibility(spec, p, args.s or 2)
        except fgl.DivisibilityViolation:
            raise
        except DomainError as exc:
            raise UsageError(str(exc)) from None
        return {"family": spec.id, "p": p, "kind": "supersingular", "s_max": args.s or 2}, rep, {}
    s_max = args.s or 2
    log = fgl.FormalGroupLogarithm.for_family(spec, params, p, max(cfg.N, s_max + 1))
    rep = fgl.unit_root_sb(log, s_max, cfg.mu_max)
    out = rep.to_json()
    return ({"family": spec.id, "p": p, "params": params, "kind": "a1", "s_max": s_max},
            {"holds": True, "checked": len(out["witnesses"]), "alpha": out["alpha"]},
            {"witnesses": out["witnesses"]})


def cmd_point_count(args, cfg):
    q = args.q
    if args.form:
        try:
            form = json.loads(args.form)
        except json.JSONDecodeError:
            raise UsageError("--form must be JSON [[coeff, [exponents]], ...]") from None
        try:
            rep = charsum.point_count(form, q)
        except DomainError as exc:
            raise UsageError(str(exc)) from None
        return {"form": form, "q": q}, rep, {}
    spec = _family(args.family)
    params = _family_params(spec, _params(args.params))
    try:
        rep = charsum.point_count(spec, q, params)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    evidence = {}
    if is_prime(q) and q >= spec.min_prime:
        log = fgl.FormalGroupLogarithm.for_family(spec, params, q, 2)
        evidence = {"count_minus_1_mod_p": (rep["count"] - 1) % q,
                    "u_p_mod_p": log.u(q).residue()}
    return {"family": spec.id, "params": params, "q": q}, rep, evidence


def cmd_jacobi_sum(args, cfg):
    p = _prime(args.p)
    if args.candidates:
        cands = charsum.quartic_unit_root_candidates(p, args.N or cfg.N)
        return {"p": p, "candidates": True}, {"candidates": cands}, {}
    try:
        c1 = charsum.MultiplicativeCharacter(p, args.d, args.j1)
        c2 = charsum.MultiplicativeCharacter(p, args.d, args.j2)
        J = charsum.jacobi_sum(c1, c2)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    full = not (c1.is_trivial() or c2.is_trivial() or (c1 * c2).is_trivial())
    return ({"p": p, "d": args.d, "j1": args.j1, "j2": args.j2},
            {"J": J.to_json(), "norm_is_p": charsum.norm_is_p(J, p) if full else None},
            {"generator": charsum.primitive_root(p)})


# --- scans ------------------------------------------------------------------


def _scan_cell(job):
    kind, fid, params, p, N, s_max = job
    spec = get_family(fid)
    if kind == "x":
        log = fgl.FormalGroupLogarithm.for_x_line(spec, params["x"], p, N)
    else:
        log = fgl.FormalGroupLogarithm.for_family(spec, params, p, N)
    rep = fgl.height_classify(log, s_max)
    return kind, params, rep.label(), rep.evidence


def _run_cells(jobs, workers: int):
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(_scan_cell, jobs))
    return [_scan_cell(j) for j in jobs]


def cmd_height_scan(args, cfg):
    spec = _family(args.family)
    p = _prime(args.p, spec)
    if not spec.is_pencil:
        raise UsageError(f"{spec.id} has no lambda to scan")
    if not fgl.v_prime_supported(spec, p):
        raise UsageError(f"p = {p} is outside the support of {spec.id}")
    base = _family_params(spec, _params(args.params))
    lams = range(1, p) if args.lam in (None, "all") else _int_list(args.lam)
    s_max = 2
    N = max(cfg.N, s_max)
    jobs = [("lam", spec.id, {**base, "lam": lam % p}, p, N, s_max) for lam in lams]
    jobs += [("x", spec.id, {"x": x}, p, N, s_max) for x in range(1, p)]
    cells = _run_cells(jobs, args.workers)
    lam_rows, x_rows = [], []
    for kind, params, label, ev in cells:
        if kind == "lam":
            lam_rows.append({"lam": params["lam"], "x": _x_image(spec, params, p),
                             "classification": label, "u_p_mod_p": ev["u_p_mod_p"],
                             "v2_mod_p": ev["v2_mod_p"]})
        else:
            x_rows.append({"x": params["x"], "classification": label,
                           "u_p_mod_p": ev["u_p_mod_p"], "v2_mod_p": ev["v2_mod_p"]})
    lam_rows.sort(key=lambda r: r["lam"])
    x_rows.sort(key=lambda r: r["x"])
    V1, V2, g = _v_polys_payload(spec, p)
    hist_lam: dict[str, int] = {}
    for r in lam_rows:
        hist_lam[r["classification"]] = hist_lam.get(r["classification"], 0) + 1
    hist_x: dict[str, int] = {}
    for r in x_rows:
        hist_x[r["classification"]] = hist_x.get(r["classification"], 0) + 1
    result = {
        "family": spec.id, "p": p,
        "lambda_table": lam_rows, "lambda_histogram": hist_lam,
        "x_table": x_rows, "x_histogram": hist_x,
        "height2_x": [r["x"] for r in x_rows if r["classification"] == "Height2"],
        "gcd_trivial": g.degree == 0,
    }
    evidence = {"V1": list(V1.coeffs), "V1_roots": V1.roots(),
                "x_images_of_lambdas": sorted({r["x"] for r in lam_rows})}
    return {"family": spec.id, "p": p, "params": base, "lam": args.lam or "all"}, result, evidence


def _x_image(spec, params, p) -> int:
    c = 1
    for name in spec.c_names:
        c = c * params[name] % p
    den = pow(params["lam"], spec.core_top, p) * spec.x_norm.numerator % p
    return c * pow(den, -1, p) * spec.x_norm.denominator % p


def _q49_cell(job):
    fid, p = job
    V1, V2 = fgl.v_polynomials(fid, p)
    g = fp_gcd(V1, V2)
    return fid, p, g.degree == 0, V1, V2


def cmd_q49_scan(args, cfg, store: ResultStore | None = None):
    if args.p_max < 7:
        raise UsageError("p_max must be at least 7")
    families = [args.family] if args.family else ["quasi-diagonal-quartic",
                                                  "quasi-diagonal-sextic"]
    for f in families:
        _family(f)
    jobs = [(f, p) for f in families for p in primes_below(args.p_max)
            if fgl.v_prime_supported(f, p)]
    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as ex:
            cells = list(ex.map(_q49_cell, jobs))
    else:
        cells = [_q49_cell(j) for j in jobs]
    rows = []
    for fid, p, ok, V1, V2 in sorted(cells, key=lambda c: (c[0], c[1])):
        row = {"family": fid, "p": p, "gcd_trivial": ok, "deg_V1": V1.degree,
               "deg_V2": V2.degree}
        key = content_key("v-polys", fid, p, get_family(fid).descriptor_json())
        row["v_polys_key"] = key
        if store is not None:
            store.put(key, {"V1": list(V1.coeffs), "V2": list(V2.coeffs)})
        rows.append(row)
    return ({"p_max": args.p_max, "families": families},
            {"rows": rows, "all_trivial": all(r["gcd_trivial"] for r in rows)},
            {"primes": {f: [r["p"] for r in rows if r["family"] == f] for f in families}})


COMMANDS: dict[str, Callable] = {
    "families": cmd_families, "log-coeffs": cmd_log_coeffs, "group-law": cmd_group_law,
    "height": cmd_height, "v-polys": cmd_v_polys, "unit-root": cmd_unit_root,
    "gamma-check": cmd_gamma_check, "newton": cmd_newton, "slope-factor": cmd_slope_factor,
    "power-structure": cmd_power_structure, "r-table": cmd_r_table,
    "congruence-check": cmd_congruence_check, "point-count": cmd_point_count,
    "jacobi-sum": cmd_jacobi_sum, "height-scan": cmd_height_scan, "q49-scan": cmd_q49_scan,
}

# commands whose results are worth caching (everything else is fast)
CACHED = {"v-polys", "height-scan", "q49-scan", "point-count", "unit-root", "group-law"}


# ---------------------------------------------------------------------------
# parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("run configuration")
    g.add_argument("--config", help="flat key=value config file")
    g.add_argument("--precision", dest="cfg_N", type=int, help="p-adic precision N")
    g.add_argument("--degree", dest="cfg_D", type=int, help="series degree cutoff D")
    g.add_argument("--s-max", dest="cfg_s_max", type=int, help="congruence depth bound")
    g.add_argument("--mu-max", dest="cfg_mu_max", type=int, help="largest mu in congruences")
    g.add_argument("--cache", dest="cfg_cache", help="results cache directory")
    g.add_argument("--no-cache", action="store_true", help="ignore the results cache")
    g.add_argument("--seed", dest="cfg_seed", type=int, help="random seed")

    parser = _Parser(prog="k3fgl", description=__doc__.splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_):
        return sub.add_parser(name, help=help_, parents=[common])

    add("families", "list the family catalog")

    def fam(sp, need_p=True):
        sp.add_argument("--family", required=True, choices=sorted(CATALOG))
        sp.add_argument("--params", help="comma list name=value (residues mod p); default 1")
        if need_p:
            sp.add_argument("--p", type=int, required=True)

    sp = add("log-coeffs", "logarithm numerators a(0..count-1) mod p^N")
    fam(sp)
    sp.add_argument("--count", type=int, default=10)

    sp = add("group-law", "formal group law G(t1, t2) mod p^N to the degree cutoff")
    fam(sp)

    sp = add("height", "height of the formal group")
    fam(sp)
    sp.add_argument("--x", type=int, help="use the lambda-free x-line at this residue")

    sp = add("v-polys", "V1, V2 over F_p for a pencil")
    sp.add_argument("--family", required=True, choices=sorted(CATALOG))
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--factor", action="store_true", help="also factor V2")

    sp = add("unit-root", "unit root from the coefficient congruences")
    fam(sp)
    sp.add_argument("--x", type=int)
    sp.add_argument("--s", type=int, help="congruence depth (default min(s_max, 2))")

    sp = add("gamma-check", "Jacobi quartic unit root against the p-adic gamma value")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--N", type=int)

    for name, help_ in (("newton", "Newton polygon of an integer polynomial"),
                        ("slope-factor", "slope decomposition over Z_p"),
                        ("power-structure", "largest r with R = Q^r")):
        sp = add(name, help_)
        sp.add_argument("--coeffs", required=True, help="JSON list, low degree first")
        if name != "power-structure":
            sp.add_argument("--p", type=int, required=True)
        if name == "slope-factor":
            sp.add_argument("--a", type=int, default=1, help="q = p^a")
            sp.add_argument("--N", type=int)

    sp = add("r-table", "admissible exponents r for (tau, h)")
    sp.add_argument("--tau", type=int)
    sp.add_argument("--h", type=int)

    sp = add("congruence-check", "unit-root, limit or supersingular congruences")
    fam(sp)
    sp.add_argument("--kind", choices=["a1", "limit", "supersingular"], default="a1")
    sp.add_argument("--s", type=int)
    sp.add_argument("--N", type=int)

    sp = add("point-count", "brute-force point count over F_q")
    sp.add_argument("--family", choices=sorted(CATALOG))
    sp.add_argument("--params")
    sp.add_argument("--form", help="JSON [[coeff, [exponents]], ...]")
    sp.add_argument("--q", type=int, required=True)

    sp = add("jacobi-sum", "Jacobi sum J(chi^j1, chi^j2) for characters of order dividing d")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--d", type=int, default=4)
    sp.add_argument("--j1", type=int, default=1)
    sp.add_argument("--j2", type=int, default=1)
    sp.add_argument("--candidates", action="store_true",
                    help="list quartic unit-root candidates in Z_p instead")
    sp.add_argument("--N", type=int)

    sp = add("height-scan", "height over every lambda and every x in F_p")
    sp.add_argument("--family", required=True, choices=sorted(CATALOG))
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--params")
    sp.add_argument("--lam", help='"all" or a list of residues')
    sp.add_argument("--workers", type=int, default=1)

    sp = add("q49-scan", "gcd(V1, V2) over all primes below p_max")
    sp.add_argument("--p-max", type=int, default=150)
    sp.add_argument("--family", choices=["quasi-diagonal-quartic", "quasi-diagonal-sextic"])
    sp.add_argument("--workers", type=int, default=1)
    return parser


def _config_from(args) -> RunConfig:
    try:
        return load_config(args.config, N=args.cfg_N, D=args.cfg_D, s_max=args.cfg_s_max,
                           mu_max=args.cfg_mu_max, cache=args.cfg_cache, seed=args.cfg_seed)
    except (DomainError, OSError) as exc:
        raise UsageError(str(exc)) from None


def _emit(doc: dict, out) -> None:
    out.write(json.dumps(doc, sort_keys=True) + "\n")
    out.flush()


def run(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    start = time.perf_counter()
    try:
        args = parser.parse_args(argv)
        cfg = _config_from(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    command = args.command
    store = None
    if cfg.cache and not args.no_cache:
        store = ResultStore(cfg.cache)
    raw = {k: v for k, v in vars(args).items()
           if not k.startswith("cfg_") and k not in ("config", "no_cache", "command")}
    key = content_key(SCHEMA, command, raw, cfg.fingerprint(), _descriptor_hash(raw))
    meta = {"timestamp": datetime.now(timezone.utc).isoformat(), "cached": False}
    doc = None
    if store is not None and command in CACHED:
        doc = store.get(key)
        if doc is not None:
            meta["cached"] = True
    code = 0
    if doc is None:
        try:
            fn = COMMANDS[command]
            if command == "q49-scan":
                params, result, evidence = fn(args, cfg, store)
            else:
                params, result, evidence = fn(args, cfg)
            doc = {"schema": SCHEMA, "command": command, "params": params, "seed": cfg.seed,
                   "config": cfg.fingerprint(), "result": result, "evidence": evidence}
            if store is not None and command in CACHED:
                store.put(key, doc)
        except UsageError as exc:
            print(f"usage error: {exc}", file=sys.stderr)
            return 2
        except COMPUTATIONAL_ERRORS as exc:
            code = 1
            doc = {"schema": SCHEMA, "command": command, "params": raw, "seed": cfg.seed,
                   "config": cfg.fingerprint(),
                   "result": {"error": type(exc).__name__, "message": str(exc)},
                   "evidence": {k: v for k, v in (("mu", getattr(exc, "mu", None)),
                                                  ("s", getattr(exc, "s", None)),
                                                  ("needed", getattr(exc, "needed", None)))
                                if v is not None}}
        except DomainError as exc:
            print(f"usage error: {exc}", file=sys.stderr)
            return 2
    meta["elapsed_s"] = round(time.perf_counter() - start, 6)
    _emit({**doc, "meta": meta}, out)
    return code


def _descriptor_hash(raw: dict) -> str | None:
    fid = raw.get("family")
    if fid and fid in CATALOG:
        return content_key(CATALOG[fid].descriptor_json())
    return None


def strip_meta(line: str) -> str:
    """Canonical form of an output line with the volatile ``meta`` field removed."""
    doc = json.loads(line)
    doc.pop("meta", None)
    return canonical_json(doc)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
