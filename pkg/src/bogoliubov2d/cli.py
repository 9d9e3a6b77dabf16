"""Command-line driver producing plot-ready tables.

Usage::

    python -m bogoliubov2d scatter --config run.ini
    python -m bogoliubov2d cnu --nu 25.132741228718345 --format json
    python -m bogoliubov2d energy --nu 25.132741228718345 --b 0.05 --b 0.02 --b 0.01
    python -m bogoliubov2d logft
    python -m bogoliubov2d ideal

The configuration is an INI file; every section and key is optional.  The
columns of each table are listed in ``schema.json`` next to this module.
Exit status: 0 if every check passes, 1 if a numeric check fails, 2 for
configuration or input errors.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import math
import sys
import warnings
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from . import asymptotics, logft
from .bogoliubov import ThermoPoint, error_diagnostics, solve_rho0
from .constants import EULER_GAMMA
from .errors import BogoliubovError, ConfigError, InvalidPotential
from .quadrature import DEFAULT_SPEC, QuadSpec
from .scattering import IdealizedProfile, PotentialSpec, solve_scattering

__all__ = ["RunConfig", "Table", "load_config", "main", "schema"]

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


@dataclass
class RunConfig:
    """All knobs of a run, read from the INI file and overridden by flags."""

    potential: dict = field(default_factory=lambda: {"kind": "bump"})
    rho_ref: float = 1.0
    nu_override: float | None = None
    b_list: list = field(default_factory=lambda: [0.05, 0.02, 0.01, 0.005])
    d_grid: list | None = None
    temperature: float = 0.0
    t0_fraction: float = 0.0
    d_max: float = 1e3
    diagnostics: bool = True
    quad: QuadSpec = DEFAULT_SPEC
    fit_window: tuple = (2.0, 10.0)
    fit_points: int = 64
    kappas: list = field(default_factory=lambda: [2.0, 5.0])
    corrupt_epsilon: float = 1.0
    ideal_T: float = 1.0
    ideal_mu: float = -1.0
    ideal_rho: float = 0.01
    output_format: str = "csv"
    output_path: str | None = None

    def __post_init__(self):
        if not self.b_list:
            raise ConfigError("b_list must not be empty")
        if any(not 0 < b < 1 for b in self.b_list):
            raise ConfigError("every b must lie in (0, 1)")
        if any(x <= y for x, y in zip(self.b_list, self.b_list[1:])):
            warnings.warn("b_list is not strictly decreasing", stacklevel=2)
        if self.nu_override is not None and not self.nu_override > 0:
            raise ConfigError("nu must be positive")
        if self.temperature < 0:
            raise ConfigError("temperature must be non-negative")
        if self.output_format not in ("csv", "json"):
            raise ConfigError(f"unknown output format {self.output_format!r}")


def _floats(text: str) -> list:
    return [float(x) for x in text.replace(",", " ").split()]


def load_config(path: str | None) -> RunConfig:
    """Read an INI file into a :class:`RunConfig` (defaults when ``path`` is None)."""
    if path is None:
        return RunConfig()
    cp = configparser.ConfigParser()
    try:
        with open(path) as fh:
            cp.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    kw: dict = {}
    try:
        if cp.has_section("potential"):
            kw["potential"] = dict(cp["potential"])
        if cp.has_section("run"):
            run = cp["run"]
            if "rho_ref" in run:
                kw["rho_ref"] = run.getfloat("rho_ref")
            if "nu" in run:
                kw["nu_override"] = run.getfloat("nu")
            if "b_list" in run:
                kw["b_list"] = _floats(run["b_list"])
            if "d_grid" in run:
                kw["d_grid"] = _floats(run["d_grid"]) or None
            for key in ("temperature", "t0_fraction", "d_max"):
                if key in run:
                    kw[key] = run.getfloat(key)
            if "diagnostics" in run:
                kw["diagnostics"] = run.getboolean("diagnostics")
        if cp.has_section("quad"):
            q = cp["quad"]
            changes = {}
            for key in ("abs_tol", "rel_tol", "tail_cut"):
                if key in q:
                    changes[key] = q.getfloat(key)
            for key in ("max_subdivisions", "tail_order"):
                if key in q:
                    changes[key] = q.getint(key)
            kw["quad"] = DEFAULT_SPEC.replace(**changes)
        if cp.has_section("scattering"):
            sc = cp["scattering"]
            if "fit_window" in sc:
                lo, hi = _floats(sc["fit_window"])
                kw["fit_window"] = (lo, hi)
            if "fit_points" in sc:
                kw["fit_points"] = sc.getint("fit_points")
        if cp.has_section("logft"):
            lf = cp["logft"]
            if "kappa" in lf:
                kw["kappas"] = _floats(lf["kappa"])
            if "corrupt_epsilon" in lf:
                kw["corrupt_epsilon"] = lf.getfloat("corrupt_epsilon")
        if cp.has_section("ideal"):
            ig = cp["ideal"]
            for key, name in (("temperature", "ideal_T"), ("mu", "ideal_mu"), ("rho", "ideal_rho")):
                if key in ig:
                    kw[name] = ig.getfloat(key)
        if cp.has_section("output"):
            out = cp["output"]
            if "format" in out:
                kw["output_format"] = out["format"]
            if "path" in out:
                kw["output_path"] = out["path"]
    except ValueError as exc:
        raise ConfigError(f"bad value in {path}: {exc}") from exc
    return RunConfig(**kw)


def build_potential(desc: dict) -> PotentialSpec:
    kind = desc.get("kind", "bump")
    num = {k: float(v) for k, v in desc.items() if k not in ("kind", "path")}
    try:
        if kind == "bump":
            return PotentialSpec.bump(num.get("amplitude", 10.0), num.get("radius", 1.0))
        if kind == "disc":
            return PotentialSpec.smoothed_disc(num.get("height", 1.0), num.get("radius", 1.0), num.get("width", 0.2))
        if kind == "table":
            if "path" not in desc:
                raise ConfigError("a tabulated potential needs a path")
            return PotentialSpec.from_file(desc["path"], mollify=num.get("mollify", 0.02))
    except OSError as exc:
        raise ConfigError(f"cannot read potential table: {exc}") from exc
    raise ConfigError(f"unknown potential kind {kind!r}")


# -- tables ------------------------------------------------------------------------

@dataclass
class Table:
    """Rows of one command plus a footer of scalar results and named checks."""

    command: str
    columns: list
    rows: list = field(default_factory=list)
    footer: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)

    def add(self, **row):
        self.rows.append([row.get(c) for c in self.columns])

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> str:
        data = {
            "command": self.command,
            "columns": {c: [r[i] for r in self.rows] for i, c in enumerate(self.columns)},
            "footer": self.footer,
            "checks": self.checks,
        }
        return json.dumps(data, indent=1, default=_jsonable)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for r in self.rows:
            w.writerow([_cell(x) for x in r])
        for k, v in self.footer.items():
            buf.write(f"# {k}={_cell(v)}\n")
        for k, v in self.checks.items():
            buf.write(f"# check {k}={'pass' if v else 'fail'}\n")
        return buf.getvalue()


def _cell(x):
    if isinstance(x, bool):
        return str(x)
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return "" if x is None else str(x)


def _jsonable(x):
    if isinstance(x, np.floating):
        return float(x)
    if isinstance(x, np.bool_):
        return bool(x)
    raise TypeError(type(x))


def schema() -> dict:
    """Column documentation shipped with the package."""
    return json.loads(resources.files(__package__).joinpath("schema.json").read_text())


# -- commands ----------------------------------------------------------------------

def cmd_scatter(cfg: RunConfig) -> Table:
    pot = build_potential(cfg.potential)
    sol = solve_scattering(pot, cfg.rho_ref, cfg.quad, fit_window=cfg.fit_window, fit_points=cfg.fit_points)
    t = Table("scatter", schema()["scatter"]["columns"])
    ratio = sol.vwhat0 / (8.0 * math.pi * sol.b)
    t.add(
        a=sol.a,
        b=sol.b,
        epsilon=sol.epsilon,
        vhat0=sol.vhat0,
        nu=sol.nu,
        vwhat0_ratio=ratio,
        fit_residual=sol.fit_residual,
        identity_residual=sol.identity_residual,
        curvature_v=sol.curvature_v,
        curvature_vw=sol.curvature_vw,
        vhat_nonnegative=sol.vhat_nonnegative,
    )
    t.checks["vwhat0_8pi_b"] = abs(ratio - 1.0) <= 1e-8
    t.checks["half_int_vw0_2pi"] = abs(sol.identity_residual) <= 1e-8
    return t


def cmd_cnu(cfg: RunConfig) -> Table:
    nu = cfg.nu_override if cfg.nu_override is not None else 8.0 * math.pi
    grid = cfg.d_grid
    if not grid:
        grid = [0.0] + list(np.geomspace(1e-3, cfg.d_max, 199))
    t = Table("cnu", schema()["cnu"]["columns"])
    for d in grid:
        t.add(d=float(d), c_nu=asymptotics.c_nu_of_d(nu, float(d)))
    d_star, value = asymptotics.minimize_cnu(nu, cfg.d_max)
    t.footer.update(nu=nu, d_star=d_star, c_nu_min=value)
    return t


def _energy_point(cfg: RunConfig, b: float, sol):
    """Thermodynamic point and profile for one row of the energy table."""
    if cfg.nu_override is not None or sol is None:
        nu = cfg.nu_override if cfg.nu_override is not None else 8.0 * math.pi
        return ThermoPoint(cfg.rho_ref, 0.0, nu, b), IdealizedProfile(b, nu, cfg.rho_ref)
    sb = sol.at_b(b)
    return ThermoPoint.from_solution(sb), sb


def cmd_energy(cfg: RunConfig) -> Table:
    if cfg.temperature != 0:
        raise ConfigError("the energy expansion is run at temperature 0")
    sol = None
    if cfg.nu_override is None:
        pot = build_potential(cfg.potential)
        sol = solve_scattering(pot, cfg.rho_ref, cfg.quad, fit_window=cfg.fit_window, fit_points=cfg.fit_points)
    t = Table("energy", schema()["energy"]["columns"])
    ratios = []
    for b in cfg.b_list:
        tp, prof = _energy_point(cfg, b, sol)
        r = asymptotics.ground_state_expansion(tp, prof, cfg.quad, d_max=cfg.d_max, t0_fraction=cfg.t0_fraction)
        e2 = e3 = e4 = a1 = math.nan
        if cfg.diagnostics:
            st = solve_rho0(tp, r.d_star_numeric, prof, cfg.quad, t0_fraction=cfg.t0_fraction)
            dg = error_diagnostics(tp, st, cfg.quad, with_decomposition=False)
            e2, e3, e4, a1 = abs(dg.e2), abs(dg.e3), abs(dg.e4), dg.a1_bound
        ratios.append(r.residual_ratio)
        t.add(
            b=b,
            rho=tp.rho,
            nu=tp.nu,
            f_min=r.f_min,
            leading=r.leading,
            log_term=r.log_term,
            const_term=r.const_term,
            residual=r.residual,
            residual_ratio=r.residual_ratio,
            d_star=r.d_star,
            d_star_numeric=r.d_star_numeric,
            rho0_ratio=r.rho0_ratio,
            rho0_ratio_predicted=1.0 / (1.0 + asymptotics.c_of_d(r.d_star_numeric) * b),
            abs_e2=e2,
            abs_e3=e3,
            abs_e4=e4,
            a1_bound=a1,
        )
    if len(ratios) > 1:
        t.checks["residual_ratio_decreasing"] = all(x > y for x, y in zip(ratios, ratios[1:]))
    return t


def cmd_logft(cfg: RunConfig) -> Table:
    t = Table("logft", schema()["logft"]["columns"])
    c0 = logft.c0_check(cfg.quad)
    res = abs(c0 - logft.C0_EXACT)
    t.add(check="c0", parameter=math.nan, residual=res, tolerance=1e-8, passed=res <= 1e-8)
    for b in (0.01, 0.05):
        for a in (0.3, 1.0):
            eps = 2.0 * math.exp(-EULER_GAMMA - 0.5 / b) / a * cfg.corrupt_epsilon
            r = abs(logft.delta_cancellation_check(b=b, a=a, epsilon=eps))
            t.add(check=f"delta_cancellation_b{b!r}_a{a!r}", parameter=b, residual=r, tolerance=1e-14, passed=r <= 1e-14)
    phi = lambda p: np.exp(-0.5 * np.asarray(p) ** 2)
    for k in cfg.kappas:
        r = abs(logft.p_scaling_residual(phi, k, cfg.quad))
        t.add(check="p_scaling", parameter=k, residual=r, tolerance=1e-7, passed=r <= 1e-7)
    for row in t.rows:
        t.checks[f"{row[0]}@{row[1]!r}"] = bool(row[4])
    return t


def cmd_ideal(cfg: RunConfig) -> Table:
    T, mu, rho = cfg.ideal_T, cfg.ideal_mu, cfg.ideal_rho
    t = Table("ideal", schema()["ideal"]["columns"])
    closed = asymptotics.ideal_gas_2d(mu, T)
    quad = asymptotics.ideal_gas_2d_quadrature(mu, T, cfg.quad)
    t.add(quantity="rho_2d", closed_form=closed, quadrature=quad, abs_error=abs(closed - quad))
    f0, rho_fc = asymptotics.ideal_gas_3d(T, rho)
    q3 = asymptotics.rho_fc_quadrature(T, cfg.quad)
    t.add(quantity="rho_fc_3d", closed_form=rho_fc, quadrature=q3, abs_error=abs(rho_fc - q3))
    t.footer.update(T=T, mu=mu, rho=rho, F0_3d=f0, mu_2d_of_rho=asymptotics.ideal_gas_2d_mu(rho, T))
    t.checks["rho_2d"] = abs(closed - quad) <= 1e-8
    t.checks["rho_fc_3d"] = abs(rho_fc - q3) <= 1e-6
    return t


COMMANDS = {
    "scatter": cmd_scatter,
    "cnu": cmd_cnu,
    "energy": cmd_energy,
    "logft": cmd_logft,
    "ideal": cmd_ideal,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bogoliubov2d", description="Dilute 2D Bose gas: numerical checks and tables.")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", help="INI configuration file")
    parser.add_argument("--out", help="output file (default: stdout)")
    parser.add_argument("--format", choices=("csv", "json"), help="table encoding")
    parser.add_argument("--b", action="append", type=float, help="dilute parameter; repeat for a sweep")
    parser.add_argument("--nu", type=float, help="use the idealized profile with this nu")
    parser.add_argument("--seedless", action="store_true", help="accepted for compatibility; runs are always deterministic")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.b:
            cfg.b_list = args.b
        if args.nu is not None:
            cfg.nu_override = args.nu
        if args.format:
            cfg.output_format = args.format
        if args.out:
            cfg.output_path = args.out
        cfg.__post_init__()
        table = COMMANDS[args.command](cfg)
    except (ConfigError, InvalidPotential) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BogoliubovError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_FAIL
    text = table.to_json() if cfg.output_format == "json" else table.to_csv()
    if cfg.output_path:
        with open(cfg.output_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if table.passed else EXIT_FAIL
