"""``recip``: command-line front end.

Subcommands::

    recip np --poly "T^3-T-1" --p 59
    recip eta --spec "1^1 23^1" --terms 25
    recip verify cubic23 --pmax 10000 --json
    recip all --pmax 100

Settings resolve as flags > ``RECIP_*`` environment variables > ``recip.conf``
(``key = value`` lines, ``#`` comments) > built-in defaults.  Exit status is
0 when everything passed, 1 on a law violation and 2 on bad input.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import os
import sys
import time
from pathlib import Path
from typing import Callable, Mapping, Sequence

from reciprocity import laws
from reciprocity.cache import CoefficientCache
from reciprocity.ellcurve import CURVES, WeierstrassCurve, parse_curve
from reciprocity.modarith import DomainError, is_prime
from reciprocity.parsing import ParseError
from reciprocity.polyring import count_distinct_roots, count_distinct_roots_many, parse_poly, reduce_mod_p
from reciprocity.qseries import EtaSpec, check_modularity, eta_product, quadratic_character
from reciprocity.report import LawReport

log = logging.getLogger("recip")

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2
CONFIG_FILE = "recip.conf"
ENV_PREFIX = "RECIP_"


class UsageError(Exception):
    pass


@dataclasses.dataclass
class RunConfig:
    pmax: int | None = None
    truncation: int | None = None
    tolerance: float | None = None
    bins: int = 40
    output_format: str = "table"
    cache_dir: str | None = None
    verify_cache: bool = False
    seed: int = 0
    jobs: int = 1

    def validate(self) -> None:
        if self.pmax is not None and self.pmax < 1:
            raise UsageError("pmax must be positive")
        if self.truncation is not None:
            if self.truncation < 1:
                raise UsageError("truncation must be positive")
            if self.pmax is not None and self.truncation <= self.pmax:
                raise UsageError(f"truncation {self.truncation} must exceed pmax {self.pmax}")
        if self.bins < 2:
            raise UsageError("bins must be at least 2")
        if self.output_format not in ("table", "json", "csv"):
            raise UsageError(f"unknown format {self.output_format!r}")
        if self.jobs < 1:
            raise UsageError("jobs must be at least 1")

    def cache(self) -> CoefficientCache | None:
        if not self.cache_dir:
            return None
        return CoefficientCache(self.cache_dir, verify=self.verify_cache, seed=self.seed)


_FIELDS = {f.name: f for f in dataclasses.fields(RunConfig)}
_ALIASES = {"format": "output_format"}


def _coerce(name: str, raw: str):
    kind = _FIELDS[name].type
    if "bool" in kind:
        return raw.strip().lower() in ("1", "true", "yes", "on")
    if "int" in kind:
        return int(raw)
    if "float" in kind:
        return float(raw)
    return raw.strip()


def read_config_file(path: Path) -> dict[str, str]:
    out = {}
    for lineno, line in enumerate(path.read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def resolve_config(
    flags: Mapping[str, object],
    env: Mapping[str, str] | None = None,
    config_path: str | Path | None = None,
) -> RunConfig:
    """Merge the four configuration layers into a validated :class:`RunConfig`."""
    env = os.environ if env is None else env
    layers: list[dict[str, str]] = []
    path = Path(config_path) if config_path else Path(CONFIG_FILE)
    if config_path or path.exists():
        try:
            layers.append(read_config_file(path))
        except OSError as err:
            raise UsageError(f"cannot read config {path}: {err}") from err
    layers.append({k[len(ENV_PREFIX):].lower(): v for k, v in env.items() if k.startswith(ENV_PREFIX)})

    values: dict[str, object] = {}
    for layer in layers:
        for key, raw in layer.items():
            key = _ALIASES.get(key, key)
            if key not in _FIELDS:
                log.warning("ignoring unknown setting %r", key)
                continue
            try:
                values[key] = _coerce(key, raw)
            except ValueError as err:
                raise UsageError(f"bad value for {key}: {raw!r}") from err
    values.update({k: v for k, v in flags.items() if k in _FIELDS and v is not None})
    cfg = RunConfig(**values)
    cfg.validate()
    return cfg


# --- law dispatch -------------------------------------------------------------


@dataclasses.dataclass
class LawArgs:
    curve: str | None = None
    spec: str | None = None
    l: int | None = None
    m: int | None = None
    poly: str | None = None
    modulus: int | None = None
    source: str | None = None
    q: int | None = None
    histogram_csv: str | None = None


def _curve(text: str | None, default: str) -> WeierstrassCurve:
    text = text or default
    return CURVES[text] if text in CURVES else parse_curve(text)


def _pmax(cfg: RunConfig, default: int, minimum: int = 2) -> int:
    return max(cfg.pmax if cfg.pmax is not None else default, minimum)


def _run_cyclotomic(cfg, a, cache):
    pmax = _pmax(cfg, 10**4)
    ms = [a.m] if a.m else list(range(2, 31))
    report = LawReport("cyclotomic", (2, pmax))
    for m in ms:
        sub = laws.verify_cyclotomic_split(m, pmax)
        report.checked += sub.checked
        report.violations += [((m, k), e, g) for k, e, g in sub.violations]
    report.summary["m"] = ms
    return report


def _run_quad_residues(cfg, a, cache):
    f = parse_poly(a.poly or "T^2-11")
    split, report = laws.discover_split_residues(f, a.modulus or 44, _pmax(cfg, 10**5))
    return report


def _run_modularity(label: str, spec: str, default_pmax: int):
    def run(cfg, a, cache):
        pmax = _pmax(cfg, default_pmax)
        E = _curve(a.curve, label)
        return laws.verify_elliptic_modularity(
            E, a.spec or spec, pmax, truncation=cfg.truncation, cache=cache, jobs=cfg.jobs
        )
    return run


def _run_sato_tate(cfg, a, cache):
    source = a.source or a.curve or "11a"
    if source != "delta":
        source = _curve(source, "11a")
    hist, report = laws.sato_tate_histogram(
        source, _pmax(cfg, 10**5), bins=cfg.bins, tolerance=cfg.tolerance, cache=cache, jobs=cfg.jobs
    )
    if a.histogram_csv:
        Path(a.histogram_csv).write_text(hist.to_csv())
    return report


def _run_torsion(cfg, a, cache):
    pmax = _pmax(cfg, 2 * 10**5)
    l = a.l or 7
    _, _, report = laws.torsion_split_scan(
        _curve(a.curve, "11a"), l, max(pmax, l), spec=a.spec or "1^2 11^2", cache=cache, jobs=cfg.jobs
    )
    return report


def _run_L_compare(cfg, a, cache):
    X = _pmax(cfg, 2000, 1)
    if a.q:
        report = laws.compare_L_coefficients(
            laws.quadratic_artin_side(a.q, X), laws.legendre_series(a.q, X + 1), X, {a.q}
        )
        report.summary["side"] = f"quadratic q={a.q}"
        return report
    E = _curve(a.curve, "11a")
    bad = {p for p in laws.primes_upto(X) if not E.is_good(p)}
    hecke = laws.eta_series(a.spec or "1^2 11^2", X + 1, cache)
    report = laws.compare_L_coefficients(laws.elliptic_artin_side(E, X, cfg.jobs), hecke, X, bad)
    report.summary["side"] = f"elliptic {E}"
    return report


def _run_functional_equation(cfg, a, cache):
    tol = cfg.tolerance if cfg.tolerance is not None else 1e-8
    weight1 = check_modularity(
        lambda T: eta_product("1^1 23^1", T), 23, 1, character=quadratic_character(23), tolerance=tol
    )
    weight2 = check_modularity(lambda T: eta_product("1^2 11^2", T), 11, 2, tolerance=tol)
    report = LawReport("functional-eq", (0, 0))
    for name, sub in (("eta 1^1 23^1", weight1), ("eta 1^2 11^2", weight2)):
        report.checked += sub.checked
        report.violations += [((name, k), e, g) for k, e, g in sub.violations]
        report.summary[name] = {k: sub.summary[k] for k in ("truncation", "max_rel_error")}
    return report


LAWS: dict[str, tuple[str, Callable[[RunConfig, LawArgs, CoefficientCache | None], LawReport]]] = {
    "qr": ("quadratic reciprocity for odd prime pairs", lambda c, a, k: laws.verify_quadratic_reciprocity(_pmax(c, 500, 5))),
    "cyclotomic": ("Phi_m splits completely iff p = 1 mod m (--m, default 2..30)", _run_cyclotomic),
    "quad-residues": ("split residues of --poly modulo --modulus (default T^2-11 mod 44)", _run_quad_residues),
    "gf-quadratic": ("N_p(T^2-T-1) from a rational generating function", lambda c, a, k: laws.verify_quadratic_gf(_pmax(c, 10**4))),
    "cubic23": ("T^3-T-1 against eta 1^1 23^1 and two binary forms", lambda c, a, k: laws.verify_cubic23(_pmax(c, 10**4, 23), cache=k)),
    "chebotarev": ("root-count frequencies of T^3-T-1", lambda c, a, k: laws.verify_chebotarev(_pmax(c, 10**5), c.tolerance)),
    "weight1": ("T^3+T-1 against a weight-one theta difference", lambda c, a, k: laws.verify_weight1_form(a.poly or laws.CUBIC_31, _pmax(c, 1000, 31), cache=k)),
    "eta12": ("eta 12^2 as a signed theta series", lambda c, a, k: laws.verify_eta12_identity(_pmax(c, 1000))),
    "gauss2": ("T^3-2 splits iff p = x^2 + 27y^2", lambda c, a, k: laws.verify_gauss_cubic2(_pmax(c, 10**4, 31))),
    "modularity-11": ("y^2+y=x^3-x^2 against eta 1^2 11^2", _run_modularity("11a", "1^2 11^2", 2000)),
    "modularity-32": ("y^2=x^3-x against eta 4^2 8^2", _run_modularity("32a", "4^2 8^2", 1000)),
    "modularity-36": ("y^2=x^3+1 against eta 6^4", _run_modularity("36a", "6^4", 1000)),
    "theta11": ("level-11 quaternary theta difference", lambda c, a, k: laws.verify_theta_difference_level11(_pmax(c, 2000), cache=k, jobs=c.jobs)),
    "hecke": ("eigenform relations of every q-expansion", lambda c, a, k: laws.verify_hecke_suite(_pmax(c, 1999) + 1, cache=k)),
    "ramanujan": ("tau(p) = 1 + p^11 mod 691", lambda c, a, k: laws.verify_ramanujan(_pmax(c, 5000), cache=k)),
    "sato-tate": ("semicircle law (--source delta or a curve)", _run_sato_tate),
    "torsion-split": ("primes splitting completely in Q(E[l])", _run_torsion),
    "mu-split": ("x^l = 1 has l solutions iff p = 1 mod l", lambda c, a, k: laws.mu_split_law(a.l or 7, _pmax(c, 10**4))),
    "L-compare": ("Euler product against q-expansion coefficients (--q for the quadratic case)", _run_L_compare),
    "functional-eq": ("numerical Gamma_0(N) symmetry at weights 1 and 2", _run_functional_equation),
}

# ids run by ``recip all`` (everything)
ALL_LAWS = tuple(LAWS)


def render(report: LawReport, fmt: str) -> str:
    if fmt == "json":
        return report.to_json()
    if fmt == "csv":
        return report.to_csv()
    return report.to_table()


# --- subcommands --------------------------------------------------------------


def cmd_np(args, cfg: RunConfig, out) -> int:
    f = parse_poly(args.poly)
    if args.p is not None:
        bad = [p for p in args.p if not is_prime(p)]
        if bad:
            raise UsageError(f"not prime: {bad}")
        rows = [(p, count_distinct_roots(reduce_mod_p(f, p)).distinct_roots) for p in args.p]
    else:
        pmax = cfg.pmax if cfg.pmax is not None else 100
        rows = sorted(count_distinct_roots_many(f, laws.primes_upto(pmax)).items())
    out.write("".join(f"{p},{n}\n" for p, n in rows))
    return EXIT_OK


def cmd_eta(args, cfg: RunConfig, out) -> int:
    spec = EtaSpec.parse(args.spec)
    if args.terms < 1:
        raise UsageError("terms must be positive")
    text = laws.eta_series(spec, args.terms, cfg.cache()).to_csv()
    if args.output:
        Path(args.output).write_text(text)
    else:
        out.write(text)
    return EXIT_OK


def _law_args(args) -> LawArgs:
    return LawArgs(**{f.name: getattr(args, f.name, None) for f in dataclasses.fields(LawArgs)})


def cmd_verify(args, cfg: RunConfig, out) -> int:
    if args.law_id not in LAWS:
        raise UsageError(f"unknown law {args.law_id!r}; valid ids: {', '.join(LAWS)}")
    report = LAWS[args.law_id][1](cfg, _law_args(args), cfg.cache())
    out.write(render(report, cfg.output_format).rstrip("\n") + "\n")
    return EXIT_OK if report.passed else EXIT_VIOLATION


def cmd_all(args, cfg: RunConfig, out) -> int:
    cache = cfg.cache()
    failed = []
    start = time.perf_counter()
    for law_id in ALL_LAWS:
        t0 = time.perf_counter()
        report = LAWS[law_id][1](cfg, LawArgs(), cache)
        dt = time.perf_counter() - t0
        status = "PASS" if report.passed else "FAIL"
        out.write(f"{law_id:<16} {status}  checked={report.checked:<8} {dt:8.2f}s\n")
        if not report.passed:
            failed.append(law_id)
            log.info("%s", report.to_table())
    out.write(f"{'total':<16} {'PASS' if not failed else 'FAIL'}  {time.perf_counter() - start:26.2f}s\n")
    if failed:
        out.write(f"failing: {' '.join(failed)}\n")
        return EXIT_VIOLATION
    return EXIT_OK


# --- argument parsing ---------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pmax", type=int, help="largest prime (or index) examined")
    common.add_argument("--truncation", type=int, help="q-series truncation; must exceed pmax")
    common.add_argument("--tolerance", type=float, help="statistical or numerical tolerance")
    common.add_argument("--bins", type=int, help="histogram bins (default 40)")
    common.add_argument("--format", dest="output_format", choices=("table", "json", "csv"))
    common.add_argument("--json", dest="output_format", action="store_const", const="json", help="same as --format json")
    common.add_argument("--cache-dir", help="directory for cached coefficient tables")
    common.add_argument("--verify-cache", action="store_const", const=True, help="spot-check cache hits against fresh values")
    common.add_argument("--seed", type=int, help="seed for randomized sampling")
    common.add_argument("--jobs", type=int, help="worker processes for point counting")
    common.add_argument("--config", help=f"configuration file (default ./{CONFIG_FILE} if present)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="recip", description="Numerical checks of reciprocity laws.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("np", parents=[common], help="distinct roots of a polynomial mod p")
    p.add_argument("--poly", required=True, help='monic integer polynomial, e.g. "T^3-T-1"')
    p.add_argument("--p", type=int, action="append", help="prime (repeatable); default all primes <= pmax")
    p.set_defaults(func=cmd_np)

    p = sub.add_parser("eta", parents=[common], help="q-expansion of an eta product as n,c_n rows")
    p.add_argument("--spec", required=True, help='factors N^e, e.g. "1^2 11^2"')
    p.add_argument("--terms", type=int, default=25)
    p.add_argument("--output", help="write to this file instead of stdout")
    p.set_defaults(func=cmd_eta)

    epilog = "laws:\n" + "\n".join(f"  {k:<15} {v[0]}" for k, v in LAWS.items())
    epilog += (
        "\n\nL-compare reads the Euler factors as functions of p^-s; an exponent"
        "\nwritten p^+s in the source formula is taken to mean p^-s."
    )
    p = sub.add_parser(
        "verify",
        parents=[common],
        help="run one law",
        epilog=epilog,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p.add_argument("law_id")
    p.add_argument("--curve", help="curve label (11a, 32a, 36a, 37a, 101a) or equation")
    p.add_argument("--spec", help="eta product spec")
    p.add_argument("--l", type=int, help="prime l for torsion-split and mu-split")
    p.add_argument("--m", type=int, help="cyclotomic index")
    p.add_argument("--poly", help="polynomial for quad-residues or weight1")
    p.add_argument("--modulus", type=int, help="modulus D for quad-residues")
    p.add_argument("--source", help="sato-tate source: delta or a curve")
    p.add_argument("--q", type=int, help="odd prime for the quadratic L-compare case")
    p.add_argument("--histogram-csv", help="write the sato-tate histogram here")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("all", parents=[common], help="run every law with default ranges")
    p.set_defaults(func=cmd_all)
    return parser


def main(argv: Sequence[str] | None = None, out=None, env: Mapping[str, str] | None = None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        cfg = resolve_config(vars(args), env, args.config)
        return args.func(args, cfg, out)
    except (UsageError, ParseError, DomainError, ValueError) as err:
        print(f"recip: error: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
