"""Batch verifier: ``cayleydeg <command> [options]``.

Every command emits one report (JSON by default) and exits 0 when all
non-skipped checks pass, 1 when a check fails and 2 on bad usage.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass
from importlib import resources

from . import constructions as cons
from .engine import (
    DEFAULT_CAP,
    DEFAULT_DELTA,
    brute_force_degree,
    check_dominance,
    check_equivariance,
    check_target_containment,
    projection_degree,
)
from .errors import (
    BadCharacteristic,
    BadParameter,
    CapExceeded,
    CayleyDegError,
    EliminationMismatch,
    HyperplaneCase,
    NoRoot,
    SingularDenominator,
)
from .exactfield import GF, QQ, find_prime_with_root, is_prime, make_stream
from .polylab import MultiPoly, RatFunc, compose, ratfunc_equal

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class Report:
    def __init__(self, command: str, params: dict):
        self.command = command
        self.params = params
        self.checks: list[dict] = []
        self.degree = None
        self.histogram = None
        self.result = None
        self._t0 = time.perf_counter()

    def check(self, name: str, ok, detail: str = "") -> bool:
        status = ok if isinstance(ok, str) else ("pass" if ok else "fail")
        self.checks.append({"name": name, "status": status, "detail": detail})
        return status != "fail"

    @property
    def ok(self) -> bool:
        return all(c["status"] != "fail" for c in self.checks)

    def as_dict(self) -> dict:
        out = {"command": self.command, "params": self.params, "checks": self.checks}
        if self.degree is not None:
            out["degree"] = self.degree
        if self.histogram is not None:
            out["histogram"] = {str(k): v for k, v in sorted(self.histogram.items(), key=lambda kv: int(kv[0]))}
        if self.result is not None:
            out["result"] = self.result
        out["elapsed_ms"] = round((time.perf_counter() - self._t0) * 1000, 3)
        return out

    def to_text(self) -> str:
        d = self.as_dict()
        lines = [f"{d['command']}  " + " ".join(f"{k}={v}" for k, v in d["params"].items())]
        for c in d["checks"]:
            lines.append(f"  [{c['status'].upper():7}] {c['name']}" + (f": {c['detail']}" if c["detail"] else ""))
        if "degree" in d:
            lines.append(f"degree: {d['degree']}")
        if "histogram" in d:
            lines.append("fiber histogram (size: count): " + ", ".join(f"{k}: {v}" for k, v in d["histogram"].items()))
        if isinstance(d.get("result"), list):
            lines.extend(str(x) for x in d["result"])
        lines.append(f"elapsed: {d['elapsed_ms']:.0f} ms")
        return "\n".join(lines)


def load_schema() -> dict:
    return json.loads(resources.files("cayleydeg").joinpath("report_schema.json").read_text())


# ---------------------------------------------------------------------------
# Configs


@dataclass
class SlnConfig:
    n: int
    prime: int | None = None
    zeta: int | None = None
    seed: int = 0
    samples: int = 20


@dataclass
class G2Config:
    prime: int = 1009
    brute: bool = False
    seed: int = 0
    samples: int = 20
    workers: int = 1


@dataclass
class SexticConfig:
    check: bool = False
    prime: int = 1009
    samples: int = 100
    seed: int = 0


@dataclass
class BruteConfig:
    map: str
    prime: int | None = None
    seed: int = 0
    cap: int = DEFAULT_CAP
    delta: float = DEFAULT_DELTA
    workers: int = 1


@dataclass
class ClassicalConfig:
    n: int = 3
    trials: int = 100
    seed: int = 0


def _require_prime(p: int):
    if p < 2 or not is_prime(p):
        raise UsageError(f"{p} is not prime")


def _equivariance_detail(rep) -> str:
    detail = f"{len(rep.checks)} elements, {rep.mode}"
    if rep.mode == "sampled":
        detail += f" over primes {list(rep.primes)}, {rep.points} points, error bound {rep.failure_bound:.2e}"
    if rep.failures:
        f = rep.failures[0]
        detail += f"; fails for {f.element} at {f.witness}"
    return detail


def _is_identity(maps, n: int, fld) -> bool:
    return all(ratfunc_equal(f, RatFunc(y)) for f, y in zip(maps, MultiPoly.gens(fld, n)))


# ---------------------------------------------------------------------------
# Commands


def cmd_verify_sln(cfg: SlnConfig) -> Report:
    rep = Report("verify-sln", asdict(cfg))
    n = cfg.n
    if n < 2:
        raise UsageError("n must be >= 3")
    if cfg.prime is None:
        cfg.prime = find_prime_with_root(n, 211)
        rep.params["prime"] = cfg.prime
    p = cfg.prime
    _require_prime(p)
    if (p - 1) % n:
        raise UsageError(f"prime {p} is not 1 mod {n}: no primitive {n}-th root of unity")
    if n == 2:
        try:
            cons.sln_center(n, p, 1)
        except HyperplaneCase as e:
            rep.check("center", False, f"HyperplaneCase: {e}")
        return rep
    zetas = list(range(1, n)) if cfg.zeta is None else [cfg.zeta]
    if any(not 1 <= k < n for k in zetas):
        raise UsageError(f"--zeta must lie in 1..{n - 1}")
    rng = make_stream(cfg.seed)
    F = GF(p)

    rep.check("irreducibility-certificate", cons.sln_irreducibility_certificate(n),
              "each single-coordinate restriction of f is linear; f(0) = 1")
    psi = cons.sln_psi(n, F)
    rep.check("birational-leg", _is_identity(compose(cons.sln_phi(n, F), psi.components), n, F), "phi o psi = id")
    smooth = cons.center_is_smooth(n, p)
    expected = cons.sln_hypersurface(n).degree() - 1
    degrees = set()
    for k in zetas:
        label = f"[zeta=zeta0^{k}]"
        try:
            center = cons.sln_center(n, p, k)
        except CayleyDegError as e:
            rep.check(f"center{label}", False, f"{type(e).__name__}: {e}")
            continue
        a = center[0].value
        rep.check(f"center-smoothness{label}", smooth, f"a = {a}; gcd((1+t)^n - t^n, (1+t)^(n-1) - t^(n-1)) = 1")
        c = cons.sln_full_candidate(n, p, k)
        rep.check(f"containment{label}", check_target_containment(c, rng=rng), "sum of components = 0")
        eq = check_equivariance(c, c.pair.generators, rng=rng)
        rep.check(f"equivariance{label}", eq.passed, _equivariance_detail(eq))
        rep.check(f"dominance{label}", check_dominance(c, p, rng=rng), "full-rank Jacobian at a sampled point")
        deg = projection_degree(cons.sln_projection_spec(n, p, k), p, cfg.samples, rng=rng)
        degrees.add(deg.degree)
        rep.check(f"projection-degree{label}", deg.degree == expected,
                  f"degree {deg.degree} (expected deg X - 1 = {expected}); samples {deg.as_dict()['sample_degrees']}")
    if len(degrees) == 1:
        rep.degree = degrees.pop()
    elif degrees:
        rep.check("degree-agreement", False, f"root choices disagree: {sorted(degrees)}")
    return rep


def cmd_verify_g2(cfg: G2Config) -> Report:
    rep = Report("verify-g2", asdict(cfg))
    p = cfg.prime
    _require_prime(p)
    if p == 3:
        raise UsageError("BadCharacteristic: the construction needs 1/3, so p = 3 is excluded")
    rng = make_stream(cfg.seed)
    q, ok = cons.g2_quadric_pullback()
    rep.check("quadric-pullback", ok, f"numerator of y1y2y3 - 1 = -2({q.format()})")
    rep.check("birational-leg", _is_identity(compose(cons.g2_phi(), cons.g2_psi()), 3, QQ), "phi o psi = id")
    c = cons.g2_candidate()
    rep.check("containment", check_target_containment(c, rng=rng), "sum of components = 0")
    eq = check_equivariance(c, c.pair.closure(), rng=rng)
    rep.check("equivariance", eq.passed and len(eq.checks) == 12, _equivariance_detail(eq))
    if p > 2 * c.max_degree():
        rep.check("dominance", check_dominance(c, p, rng=rng), "full-rank Jacobian at a sampled point")
    else:
        rep.check("dominance", "skipped", f"p = {p} too small for a Jacobian certificate")
    deg = projection_degree(cons.g2_projection_spec(), p, cfg.samples, rng=rng)
    rep.check("projection-degree", deg.degree == 2,
              f"degree {deg.degree}; samples {deg.as_dict()['sample_degrees']}")
    rep.degree = deg.degree
    if cfg.brute:
        try:
            bf = brute_force_degree(c.to_field(GF(p)), p, workers=cfg.workers)
        except CapExceeded as e:
            rep.check("brute-force", False, f"{e}")
            return rep
        rep.histogram = bf.histogram
        nonempty = sum(bf.histogram.values())
        share = bf.histogram.get(2, 0) / nonempty
        rep.check("brute-force-degree", bf.degree == 2, f"generic fiber size {bf.degree} over F_{p}")
        rep.check("brute-force-fiber-share", share > 0.10, f"fibers of size 2: {share:.4f} of nonempty fibers")
    return rep


def cmd_sextic(cfg: SexticConfig) -> Report:
    rep = Report("sextic", asdict(cfg))
    res = cons.eliminate_sextic()
    rep.result = res.format_lines()
    rep.degree = res.degree
    if not cfg.check:
        return rep
    _require_prime(cfg.prime)
    try:
        cons.g2_sextic_elimination()
        rep.check("coefficient-match", True, "all 7 coefficients equal the reference sextic")
    except EliminationMismatch as e:
        rep.check("coefficient-match", False, str(e))
    rep.check("recovery-formula", res.recovery_ok, "t2 = (t1^2 - 1)/(t1^2 s1 + t1 s2 - t1^3 - t1^2 + t1 + 1)")
    hits = cons.sextic_consistency(res.as_poly(), cfg.prime, cfg.samples, cfg.seed)
    rep.check("consistency-samples", hits == cfg.samples,
              f"{hits}/{cfg.samples} random points over F_{cfg.prime} vanish on the eliminated sextic")
    return rep


def _default_brute_prime(name: str) -> int:
    if name.startswith("sl") and name[2:].isdigit():
        return find_prime_with_root(int(name[2:]), 211)
    return 101


def cmd_brute_degree(cfg: BruteConfig) -> Report:
    rep = Report("brute-degree", asdict(cfg))
    if cfg.prime is None:
        cfg.prime = _default_brute_prime(cfg.map.lower())
        rep.params["prime"] = cfg.prime
    _require_prime(cfg.prime)
    try:
        c = cons.named_candidate(cfg.map, cfg.prime)
    except (BadParameter, NoRoot, BadCharacteristic) as e:
        raise UsageError(str(e)) from e
    try:
        bf = brute_force_degree(c, cfg.prime, cfg.cap, delta=cfg.delta, workers=cfg.workers)
    except CapExceeded as e:
        rep.check("brute-force", False, f"{e}. Pass a smaller --prime or raise --cap.")
        return rep
    rep.degree = bf.degree
    rep.histogram = bf.histogram
    rep.check("brute-force", True, f"{bf.samples} defined points over F_{cfg.prime}, threshold {cfg.delta}")
    return rep


def cmd_table(fmt: str) -> Report:
    rep = Report("table", {"format": fmt})
    rep.result = [e.as_dict() for e in cons.known_table()]
    return rep


def _table_text(rows: list) -> str:
    cols = ["group", "kind", "value", "provenance"]
    widths = {c: max(len(c), *(len(str(r[c])) for r in rows)) for c in cols}
    fmt = lambda r: "  ".join(str(r[c]).ljust(widths[c]) for c in cols).rstrip()  # noqa: E731
    return "\n".join([fmt({c: c for c in cols})] + [fmt(r) for r in rows])


def singular_probe(n: int) -> cons.SquareMatrix:
    """A matrix with eigenvalue -1, violating det(I + X) != 0."""
    return cons.SquareMatrix([[-1 if i == j == 0 else 0 for j in range(n)] for i in range(n)])


def cmd_classical(cfg: ClassicalConfig) -> Report:
    rep = Report("classical", asdict(cfg))
    if cfg.n < 2 or cfg.trials < 1:
        raise UsageError("need n >= 2 and trials >= 1")
    rng = make_stream(cfg.seed)
    I = cons.SquareMatrix.identity(cfg.n)
    orth = invol = equiv = 0
    skipped = 0
    for _ in range(cfg.trials):
        X = cons.SquareMatrix.random_skew(cfg.n, rng)
        S = cons.SquareMatrix.random_skew(cfg.n, rng)
        try:
            O = cons.classical_cayley(X)
            Q = cons.classical_cayley(S)
            Qi = Q.inverse()
            orth += O.transpose() @ O == I
            invol += cons.classical_cayley(O) == X
            equiv += cons.classical_cayley(Q @ X @ Qi) == Q @ O @ Qi
        except SingularDenominator:
            skipped += 1
    done = cfg.trials - skipped
    rep.check("orthogonality", orth == done, f"{orth}/{done} images satisfy O^T O = I")
    rep.check("involution", invol == done, f"{invol}/{done} satisfy c(c(X)) = X")
    rep.check("conjugation-equivariance", equiv == done, f"{equiv}/{done} satisfy c(QXQ^-1) = Q c(X) Q^-1")
    try:
        cons.classical_cayley(singular_probe(cfg.n))
        rep.check("singular-probe", False, "expected SingularDenominator")
    except SingularDenominator as e:
        rep.check("singular-probe", "skipped", f"precondition det(I + X) != 0 violated: {e}")
    return rep


# ---------------------------------------------------------------------------
# Entry point


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "text"], default="json")
    seeded = argparse.ArgumentParser(add_help=False)
    seeded.add_argument("--seed", type=int, default=0)

    ap = argparse.ArgumentParser(prog="cayleydeg", description="Verify generalized Cayley map constructions.")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("verify-sln", parents=[common, seeded], help="SL_n torus construction")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--prime", type=int)
    s.add_argument("--zeta", type=int, help="root index k in zeta0^k; default: all")
    s.add_argument("--samples", type=int, default=20)

    s = sub.add_parser("verify-g2", parents=[common, seeded], help="G_2 torus construction")
    s.add_argument("--prime", type=int, default=1009)
    s.add_argument("--brute", action="store_true")
    s.add_argument("--samples", type=int, default=20)
    s.add_argument("--workers", type=int, default=1)

    s = sub.add_parser("sextic", parents=[common, seeded], help="eliminate t2 from the G_2 system")
    s.add_argument("--check", action="store_true")
    s.add_argument("--prime", type=int, default=1009)
    s.add_argument("--samples", type=int, default=100)

    s = sub.add_parser("brute-degree", parents=[common, seeded], help="fiber histogram over F_p")
    s.add_argument("--map", required=True)
    s.add_argument("--prime", type=int)
    s.add_argument("--cap", type=int, default=DEFAULT_CAP)
    s.add_argument("--delta", type=float, default=DEFAULT_DELTA)
    s.add_argument("--workers", type=int, default=1)

    sub.add_parser("table", parents=[common], help="known Cayley degrees")

    s = sub.add_parser("classical", parents=[common, seeded], help="matrix Cayley transform identities")
    s.add_argument("--n", type=int, default=3)
    s.add_argument("--trials", type=int, default=100)
    return ap


def run(argv=None) -> tuple[Report, str]:
    args = build_parser().parse_args(argv)
    fmt = args.format
    if args.command == "verify-sln":
        return cmd_verify_sln(SlnConfig(args.n, args.prime, args.zeta, args.seed, args.samples)), fmt
    if args.command == "verify-g2":
        return cmd_verify_g2(G2Config(args.prime, args.brute, args.seed, args.samples, args.workers)), fmt
    if args.command == "sextic":
        return cmd_sextic(SexticConfig(args.check, args.prime, args.samples, args.seed)), fmt
    if args.command == "brute-degree":
        return cmd_brute_degree(BruteConfig(args.map, args.prime, args.seed, args.cap, args.delta, args.workers)), fmt
    if args.command == "table":
        return cmd_table(fmt), fmt
    return cmd_classical(ClassicalConfig(args.n, args.trials, args.seed)), fmt


def main(argv=None) -> int:
    try:
        rep, fmt = run(argv)
    except (UsageError, BadParameter, BadCharacteristic, NoRoot) as e:
        print(f"cayleydeg: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    if fmt == "json":
        print(json.dumps(rep.as_dict(), indent=2))
    elif rep.command == "table":
        print(_table_text(rep.result))
    else:
        print(rep.to_text())
    return EXIT_OK if rep.ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
