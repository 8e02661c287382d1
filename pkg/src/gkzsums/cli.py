"""Command-line front end: parse instance configs, dispatch to the library,
and emit machine-readable JSON reports plus human-readable summaries.

Exit codes: 0 all checks pass, 1 a check failed, 2 usage/config error,
3 budget or precision error.  All randomness (point sampling, randomized
identity suites) goes through one generator seeded from the config, and the
seed is echoed in the report, so a report's config re-runs to byte-identical
results.
"""

from __future__ import annotations

import argparse
import dataclasses
import itertools
import json
import random
import sys
import time
from dataclasses import dataclass
from typing import Sequence

from .arith import CycloNumber, FiniteField, embed_complex, make_field
from .frobenius import (
    InconsistentPowerSumsError,
    PrecisionError,
    charpoly_from_power_sums,
    nondegenerate_check,
    power_sums,
    verify_point,
    weight_spectrum,
)
from .lattice import ExponentMatrix
from .resonance import CharacterSpec, nonresonant
from .sums import (
    BudgetExceededError,
    LaurentPolynomial,
    SumQuery,
    batch_all_characters,
    gauss_sum,
    get_tower,
    homogeneity_check,
    hyp_sum,
    katz_equivalence,
    kloosterman_sum,
    mixed_vs_twisted_identity,
    nonconfluent_factorization,
)
from .weights import E_polynomial, GkzInstance, alpha, beta, e_value, expected_spectrum

COMMANDS = (
    "sum",
    "gauss",
    "kloosterman",
    "katz",
    "batch",
    "volume",
    "alpha-beta",
    "weights",
    "resonance",
    "nondegen",
    "lfactor",
    "verify",
    "identities",
)


class ConfigError(ValueError):
    pass


@dataclass
class InstanceConfig:
    p: int
    e: int = 1
    matrix: tuple[tuple[int, ...], ...] = ()
    chi: tuple[int, ...] = ()
    x: tuple[int, ...] | None = None  # field-element literals (base-p digit encoding)
    x_dlog: tuple[int, ...] | None = None  # alternative: exponents of the generator
    m: int = 1
    m_max: int = 3
    digits: int = 60
    tol: float = 1e-6
    budget: int = 10**8
    seed: int = 0
    attempts: int = 100
    katz_n: int = 1
    katz_m: int = 1
    count: int = 20

    def to_json(self) -> dict:
        d = dataclasses.asdict(self)
        d["matrix"] = [list(r) for r in self.matrix]
        d["chi"] = list(self.chi)
        d["x"] = list(self.x) if self.x is not None else None
        d["x_dlog"] = list(self.x_dlog) if self.x_dlog is not None else None
        return d


def _parse_matrix(text: str) -> tuple[tuple[int, ...], ...]:
    rows = []
    for row in text.split(";"):
        row = row.strip()
        if row:
            rows.append(tuple(int(v) for v in row.replace(",", " ").split()))
    return tuple(rows)


def _parse_int_list(text: str) -> tuple[int, ...]:
    return tuple(int(v) for v in text.replace(",", " ").split())


def load_config(args: argparse.Namespace) -> InstanceConfig:
    data: dict = {}
    if args.config:
        if args.config.endswith(".toml"):
            try:
                import tomllib  # py >= 3.11
            except ModuleNotFoundError:
                import tomli as tomllib
            with open(args.config, "rb") as fh:
                data = tomllib.load(fh)
        else:
            with open(args.config) as fh:
                data = json.load(fh)
    override = {
        "p": args.p,
        "e": args.e,
        "matrix": _parse_matrix(args.matrix) if args.matrix else None,
        "chi": _parse_int_list(args.chi) if args.chi is not None else None,
        "x": _parse_int_list(args.x) if args.x is not None else None,
        "x_dlog": _parse_int_list(args.x_dlog) if args.x_dlog is not None else None,
        "m": args.m,
        "m_max": args.m_max,
        "digits": args.digits,
        "tol": args.tol,
        "budget": int(float(args.budget)) if args.budget is not None else None,
        "seed": args.seed,
        "attempts": args.attempts,
        "katz_n": args.katz_n,
        "katz_m": args.katz_m,
        "count": args.count,
    }
    for k, v in override.items():
        if v is not None:
            data[k] = v
    if "p" not in data:
        raise ConfigError("p is required (flag --p or config file)")
    if "matrix" in data and data["matrix"]:
        data["matrix"] = tuple(tuple(int(v) for v in row) for row in data["matrix"])
    for key in ("chi", "x", "x_dlog"):
        if data.get(key) is not None:
            data[key] = tuple(int(v) for v in data[key])
    if "budget" in data:
        data["budget"] = int(float(data["budget"]))  # config files may say 1e8
    known = {f.name for f in dataclasses.fields(InstanceConfig)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    cfg = InstanceConfig(**{k: v for k, v in data.items() if k in known})
    _validate(cfg)
    return cfg


def _validate(cfg: InstanceConfig):
    if cfg.e < 1:
        raise ConfigError("e must be >= 1")
    if cfg.matrix:
        widths = {len(r) for r in cfg.matrix}
        if len(widths) != 1:
            raise ConfigError("matrix has ragged rows")
        n = len(cfg.matrix)
        if cfg.chi and len(cfg.chi) != n:
            raise ConfigError(f"chi has {len(cfg.chi)} entries, matrix has {n} rows")
        N = len(cfg.matrix[0])
        for name, vec in (("x", cfg.x), ("x_dlog", cfg.x_dlog)):
            if vec is not None and len(vec) != N:
                raise ConfigError(f"{name} has {len(vec)} entries, matrix has {N} columns")
    if cfg.digits < 15:
        raise ConfigError("digits must be >= 15")
    if cfg.budget < 1:
        raise ConfigError("budget must be positive")


# ---------------------------------------------------------------------------
# shared helpers


def _field(cfg: InstanceConfig) -> FiniteField:
    return make_field(cfg.p, cfg.e)


def _matrix(cfg: InstanceConfig) -> ExponentMatrix:
    if not cfg.matrix:
        raise ConfigError("this command needs a matrix")
    return ExponentMatrix(cfg.matrix)


def _chi(cfg: InstanceConfig, field: FiniteField, n: int) -> CharacterSpec:
    exps = cfg.chi if cfg.chi else (0,) * n
    if len(exps) != n:
        raise ConfigError(f"chi has {len(exps)} entries, need {n}")
    return CharacterSpec.from_field(field, exps)


def _resolve_x(cfg: InstanceConfig, field: FiniteField, N: int, rng: random.Random):
    """Explicit x (literals or dlogs), else rejection-sample a point passing
    the nondegeneracy search; returns (x, sampling info)."""
    if cfg.x is not None:
        for v in cfg.x:
            if not 0 <= v < field.q:
                raise ConfigError(f"x entry {v} is not an element of F_{field.q}")
        return tuple(cfg.x), None
    if cfg.x_dlog is not None:
        return tuple(field.exp_table[d % (field.q - 1)] for d in cfg.x_dlog), None
    A = _matrix(cfg)
    x, rejections = sample_point(field, A, rng, cfg.m_max, cfg.attempts, cfg.budget)
    return x, {"sampled": True, "rejections": rejections}


def sample_point(
    field: FiniteField,
    A: ExponentMatrix,
    rng: random.Random,
    m_max: int,
    attempts: int,
    budget: int,
) -> tuple[tuple[int, ...], int]:
    """Deterministic rejection sampling of x in (k^*)^N passing
    nondegenerate_check; returns (point, rejection count)."""
    qm1 = field.q - 1
    for trial in range(attempts):
        x = tuple(field.exp_table[rng.randrange(qm1)] for _ in range(A.N))
        ok, _ = nondegenerate_check(field, A, x, m_max, budget)
        if ok:
            return x, trial
    raise BudgetExceededError(
        f"no nondegenerate point found in {attempts} attempts; "
        "V ∩ (k*)^N may be empty at this field size"
    )


def _cyclo_json(v: CycloNumber, digits: int) -> dict:
    z = embed_complex(v, max(15, min(digits, 30)))
    return {
        "value": v.to_json(),
        "complex": [float(z.real), float(z.imag)],
        "magnitude": float(abs(z)),
    }


# ---------------------------------------------------------------------------
# command implementations (each returns (results, checks))


def cmd_sum(cfg, rng):
    field = _field(cfg)
    A = _matrix(cfg)
    chi = _chi(cfg, field, A.n)
    tower = get_tower(field, cfg.m)
    x, sampled = _resolve_x(cfg, field, A.N, rng)
    xm = tuple(tower.embed(v) for v in x)
    val = hyp_sum(SumQuery(tower, A, chi, xm), cfg.budget)
    res = {"x": list(x), "m": cfg.m, "hyp": _cyclo_json(val, cfg.digits)}
    if sampled:
        res["sampling"] = sampled
    return res, {}


def cmd_gauss(cfg, rng):
    field = _field(cfg)
    exps = cfg.chi if cfg.chi else (0,)
    tower = get_tower(field, cfg.m)
    out = []
    for ce in exps:
        g = gauss_sum(tower, ce)
        out.append({"chi": ce, "gauss": _cyclo_json(g, cfg.digits)})
    return {"sums": out}, {}


def cmd_kloosterman(cfg, rng):
    field = _field(cfg)
    if not cfg.chi:
        raise ConfigError("kloosterman needs chi (one exponent per variable)")
    tower = get_tower(field, cfg.m)
    xs = cfg.x if cfg.x is not None else (1,)
    out = []
    for xv in xs:
        if not 0 <= xv < field.q:
            raise ConfigError(f"x entry {xv} is not an element of F_{field.q}")
        val = kloosterman_sum(tower, cfg.chi, tower.embed(xv), cfg.budget)
        out.append({"x": xv, "value": _cyclo_json(val, cfg.digits)})
    return {"kloosterman": out, "n": len(cfg.chi), "m": cfg.m}, {}


def cmd_katz(cfg, rng):
    field = _field(cfg)
    n, m = cfg.katz_n, cfg.katz_m
    size = n + m - 1
    chis = cfg.chi if cfg.chi else (0,) * size
    if len(chis) != size:
        raise ConfigError(f"katz with n={n}, m={m} needs {size} characters")
    xv = cfg.x[0] if cfg.x else 1
    lhs, rhs, ok = katz_equivalence(field, n, m, chis, xv, cfg.budget)
    res = {
        "lhs": _cyclo_json(lhs, cfg.digits),
        "rhs": _cyclo_json(rhs, cfg.digits),
        "equal": ok,
    }
    return res, {"katz_equivalence": "pass" if ok else "fail"}


def cmd_batch(cfg, rng):
    field = _field(cfg)
    A = _matrix(cfg)
    x, sampled = _resolve_x(cfg, field, A.N, rng)
    table = batch_all_characters(field, A, x, cfg.budget)
    entries = [
        {"chi": list(c), "hyp": _cyclo_json(v, cfg.digits)} for c, v in sorted(table.items())
    ]
    res = {"x": list(x), "table": entries}
    if sampled:
        res["sampling"] = sampled
    return res, {}


def cmd_volume(cfg, rng):
    A = _matrix(cfg)
    inst = GkzInstance(A)
    return {
        "n": A.n,
        "N": A.N,
        "dim": inst.polytope.dim,
        "normalized_volume": inst.polytope.normalized_volume(),
        "vertices": [list(v) for v in inst.polytope.vertices],
        "cone_pointed": inst.cone.is_pointed(),
    }, {}


def cmd_alpha_beta(cfg, rng):
    A = _matrix(cfg)
    inst = GkzInstance(A)
    b = beta(inst.polytope.lattice.poset())
    res = {"beta": b.to_json(), "beta_even": b.even_powers_only()}
    if inst.cone.is_pointed():
        a = alpha(inst.cone)
        res["alpha"] = a.to_json()
        res["alpha_even"] = a.even_powers_only()
    else:
        res["alpha"] = None
        res["note"] = "cone contains a line; alpha is defined for pointed cones only"
    return res, {}


def cmd_weights(cfg, rng):
    field = _field(cfg)
    A = _matrix(cfg)
    inst = GkzInstance(A)
    chi = _chi(cfg, field, A.n)
    E = E_polynomial(inst, chi)
    spec = expected_spectrum(E, A.n, A.N, inst.rank_prediction())
    return {
        "e": e_value(inst, chi),
        "E": E.to_json()["coeffs"],
        "expected_spectrum": spec.to_json(),
        "generator": chi.generator,
    }, {}


def cmd_resonance(cfg, rng):
    field = _field(cfg)
    A = _matrix(cfg)
    chi = _chi(cfg, field, A.n)
    verdict, evidence = nonresonant(chi, GkzInstance(A).cone)
    return {
        "nonresonant": verdict,
        "evidence": evidence,
        "generator": chi.generator,
    }, {}


def cmd_nondegen(cfg, rng):
    field = _field(cfg)
    A = _matrix(cfg)
    x, sampled = _resolve_x(cfg, field, A.N, rng)
    ok, verdicts = nondegenerate_check(field, A, x, cfg.m_max, cfg.budget)
    res = {
        "x": list(x),
        "nondegenerate_up_to": cfg.m_max,
        "faces": [
            {
                "points": [list(p) for p in v.face_points],
                "status": v.status,
                "witness": (
                    {"extension": v.witness[0], "point": list(v.witness[1])}
                    if v.witness
                    else None
                ),
            }
            for v in verdicts
        ],
    }
    if sampled:
        res["sampling"] = sampled
    return res, {"nondegenerate": "pass" if ok else "fail"}


def cmd_lfactor(cfg, rng):
    field = _field(cfg)
    A = _matrix(cfg)
    inst = GkzInstance(A)
    chi = _chi(cfg, field, A.n)
    x, sampled = _resolve_x(cfg, field, A.N, rng)
    depth = inst.rank_prediction() + 2
    series = power_sums(field, A, chi, x, depth, cfg.budget)
    res = {
        "x": list(x),
        "power_sums": [s.to_json() for s in series.s_values],
        "degree": inst.rank_prediction(),
        "generator": chi.generator,
    }
    if sampled:
        res["sampling"] = sampled
    try:
        cp = charpoly_from_power_sums(series, inst.rank_prediction())
    except InconsistentPowerSumsError as exc:
        res["charpoly"] = None
        res["note"] = str(exc)
        return res, {"newton_consistency": "fail"}
    res["charpoly"] = [c.to_json() for c in cp]
    weights, roots, residual = weight_spectrum(cp, field.q, A.N, cfg.digits, cfg.tol)
    res["roots"] = [{"re": r, "im": i, "abs": a} for (r, i, a) in roots]
    res["weights"] = {str(k): v for k, v in sorted(weights.items())}
    res["max_residual"] = residual
    return res, {"newton_consistency": "pass"}


def cmd_verify(cfg, rng):
    field = _field(cfg)
    A = _matrix(cfg)
    chi = _chi(cfg, field, A.n)
    x, sampled = _resolve_x(cfg, field, A.N, rng)
    report = verify_point(
        field,
        A,
        chi,
        x,
        digits=cfg.digits,
        tol=cfg.tol,
        m_max=cfg.m_max,
        budget=cfg.budget,
    )
    res = report.to_json()
    res["x"] = list(x)
    if sampled:
        res["sampling"] = sampled
    checks = dict(report.checks)
    checks["hypotheses"] = "pass" if report.hypotheses_verified else "unverified"
    return res, checks


def cmd_identities(cfg, rng):
    field = _field(cfg)
    q = field.q
    qm1 = q - 1
    results: dict = {}
    checks: dict = {}

    # (a) mixed vs twisted on randomized instances
    count_ok = 0
    trials = []
    for _ in range(cfg.count):
        n = rng.choice((1, 2))
        m = rng.choice((1, 2)) if qm1 > 1 else 1
        if qm1 == 1:
            break
        f = _random_laurent(rng, n, q)
        fs = [_random_laurent(rng, n, q) for _ in range(m)]
        chis = [rng.randrange(1, qm1) for _ in range(m)]
        s1, s2, pg, ok = mixed_vs_twisted_identity(field, f, fs, chis, cfg.budget)
        trials.append(ok)
        count_ok += ok
    results["mixed_vs_twisted"] = {"trials": len(trials), "passed": count_ok}
    checks["mixed_vs_twisted"] = "pass" if count_ok == len(trials) else "fail"

    # (b) homogeneity on randomized (t, x)
    A = _matrix(cfg) if cfg.matrix else ExponentMatrix(((1, 0, 1), (0, 1, 1)))
    tower = get_tower(field, 1)
    hom_ok = 0
    hom_trials = 100
    for _ in range(hom_trials):
        chi = CharacterSpec.from_field(field, tuple(rng.randrange(max(1, qm1)) for _ in range(A.n)))
        x = tuple(rng.randrange(q) for _ in range(A.N))
        t = tuple(field.exp_table[rng.randrange(qm1)] for _ in range(A.n))
        _, _, ok = homogeneity_check(tower, A, chi, x, t, cfg.budget)
        hom_ok += ok
    results["homogeneity"] = {"trials": hom_trials, "passed": hom_ok}
    checks["homogeneity"] = "pass" if hom_ok == hom_trials else "fail"

    # (c) Katz equivalence, exhaustive at this field size
    katz_ok, katz_total = 0, 0
    for (kn, km) in ((1, 1), (2, 1), (1, 2)):
        size = kn + km - 1
        for chis in itertools.product(range(max(1, qm1)), repeat=size):
            for xv in range(q):
                _, _, ok = katz_equivalence(field, kn, km, chis, xv, cfg.budget)
                katz_total += 1
                katz_ok += ok
    results["katz"] = {"trials": katz_total, "passed": katz_ok}
    checks["katz"] = "pass" if katz_ok == katz_total else "fail"

    # (d) nonconfluent factorization on identity-type matrices
    fact_ok, fact_total = 0, 0
    mats = [
        ExponentMatrix(((1,),)),
        ExponentMatrix(((1, 0), (0, 1))),
        ExponentMatrix(((1, 0, 1), (0, 1, 0))),
    ]
    for A2 in mats:
        for _ in range(5):
            if qm1 == 1:
                break
            exps = tuple(rng.randrange(qm1) for _ in range(A2.n))
            chi = CharacterSpec.from_field(field, exps)
            # chi'_1 = prod chi_i for these matrices; skip the trivial case
            if sum(exps) % qm1 == 0:
                continue
            x = tuple(rng.randrange(q) for _ in range(A2.N))
            _, _, _, ok = nonconfluent_factorization(field, A2, chi, x, cfg.budget)
            fact_total += 1
            fact_ok += ok
    results["nonconfluent_factorization"] = {"trials": fact_total, "passed": fact_ok}
    checks["nonconfluent_factorization"] = "pass" if fact_ok == fact_total else "fail"

    return results, checks


def _random_laurent(rng: random.Random, n: int, q: int) -> LaurentPolynomial:
    terms = {}
    for _ in range(rng.randrange(1, 4)):
        exps = tuple(rng.randint(-2, 2) for _ in range(n))
        terms[exps] = rng.randrange(q)
    return LaurentPolynomial.make(n, terms)


HANDLERS = {
    "sum": cmd_sum,
    "gauss": cmd_gauss,
    "kloosterman": cmd_kloosterman,
    "katz": cmd_katz,
    "batch": cmd_batch,
    "volume": cmd_volume,
    "alpha-beta": cmd_alpha_beta,
    "weights": cmd_weights,
    "resonance": cmd_resonance,
    "nondegen": cmd_nondegen,
    "lfactor": cmd_lfactor,
    "verify": cmd_verify,
    "identities": cmd_identities,
}


def run(command: str, cfg: InstanceConfig) -> dict:
    """Execute one command; returns the full report dict."""
    if command not in HANDLERS:
        raise ConfigError(f"unknown command {command!r}; choose from {COMMANDS}")
    rng = random.Random(cfg.seed)
    t0 = time.perf_counter()
    results, checks = HANDLERS[command](cfg, rng)
    elapsed = time.perf_counter() - t0
    return {
        "command": command,
        "config": cfg.to_json(),
        "results": results,
        "checks": checks,
        "timing": {"seconds": round(elapsed, 6)},
    }


def _exit_code(report: dict) -> int:
    checks = report.get("checks", {})
    if any(v not in ("pass", "n/a") for v in checks.values()):
        return 1
    return 0


def _human_summary(report: dict, out):
    print(f"command : {report['command']}", file=out)
    cfg = report["config"]
    print(f"field   : p={cfg['p']} e={cfg['e']} (seed {cfg['seed']})", file=out)
    res = report["results"]
    for key in ("hyp", "e", "E", "nonresonant", "degree", "weights", "expected",
                "normalized_volume", "alpha", "beta"):
        if isinstance(res, dict) and key in res:
            print(f"{key:8s}: {json.dumps(res[key], sort_keys=True, default=str)}", file=out)
    checks = report["checks"]
    if checks:
        for name, verdict in checks.items():
            print(f"check   : {name} = {verdict}", file=out)
    print(f"time    : {report['timing']['seconds']}s", file=out)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="gkzsums",
        description="Exact GKZ hypergeometric sums over finite fields: "
        "evaluation, weight combinatorics, and Frobenius spectrum verification.",
    )
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", help="JSON or TOML config file")
    ap.add_argument("--p", type=int)
    ap.add_argument("--e", type=int)
    ap.add_argument("--matrix", help='rows separated by ";", entries by ",": "1,0,1;0,1,1"')
    ap.add_argument("--chi", help='character exponents: "1,1"')
    ap.add_argument("--x", help="evaluation point, field-element literals")
    ap.add_argument("--x-dlog", dest="x_dlog", help="evaluation point as generator exponents")
    ap.add_argument("--m", type=int, help="extension degree for sum/gauss/kloosterman")
    ap.add_argument("--m-max", dest="m_max", type=int, help="nondegeneracy search depth")
    ap.add_argument("--digits", type=int)
    ap.add_argument("--tol", type=float)
    ap.add_argument("--budget", help="max torus points per enumeration (e.g. 1e8)")
    ap.add_argument("--seed", type=int)
    ap.add_argument("--attempts", type=int, help="sampling attempts before giving up")
    ap.add_argument("--katz-n", dest="katz_n", type=int)
    ap.add_argument("--katz-m", dest="katz_m", type=int)
    ap.add_argument("--count", type=int, help="randomized trials for identities")
    ap.add_argument("--json", action="store_true", help="emit the JSON report on stdout")
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args)
        report = run(args.command, cfg)
    except (ConfigError, ValueError) as exc:
        json.dump({"error": str(exc), "kind": "config"}, sys.stderr, sort_keys=True)
        sys.stderr.write("\n")
        return 2
    except (BudgetExceededError, PrecisionError) as exc:
        json.dump({"error": str(exc), "kind": "resource"}, sys.stderr, sort_keys=True)
        sys.stderr.write("\n")
        return 3
    if args.json:
        json.dump(report, sys.stdout, sort_keys=True, default=str)
        sys.stdout.write("\n")
    else:
        _human_summary(report, sys.stdout)
    return _exit_code(report)


if __name__ == "__main__":
    sys.exit(main())
