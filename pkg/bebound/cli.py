"""
bebound command line
Every operation emits machine-readable reports on stdout; logs and diagnostics go to stderr
"""

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Tuple

import click

from bebound import bounds, oracle
from bebound.cf_core import CharFn, DiscreteDist, load_source, parse_dist_spec, parse_grid
from bebound.config import configure_logging, get_settings
from bebound.errors import AuditFailure, BoundError, DomainError
from bebound.filters import c2p_constant, get_filter, kernel_residual, validate_filter
from bebound.reports import FilterReport, PsiReport, print_table, render

logger = logging.getLogger(__name__)

FORMATS = click.Choice(["json", "csv", "table"])


@dataclass(frozen=True)
class RunConfig:
    command: str
    dist: Optional[str] = None
    n: int = 1
    k: int = 3
    p: Optional[float] = None
    T: Optional[float] = None
    c_T: Optional[float] = None
    xs: Tuple[float, ...] = ()
    tol: Optional[float] = None
    fmt: str = "json"


def _points(x: Optional[float], grid: Optional[str]) -> Tuple[float, ...]:
    if (x is None) == (grid is None):
        raise click.UsageError("give exactly one of --x and --x-grid")
    return (x,) if grid is None else tuple(parse_grid(grid))


def _load(cfg: RunConfig, raw: bool) -> Tuple[CharFn, float]:
    """c.f. of S/sqrt(n) (or of X itself with raw) and the T that goes with it."""
    if cfg.T is not None and cfg.c_T is not None:
        raise click.UsageError("--T and --cT are mutually exclusive")
    cf, beta3 = load_source(cfg.dist, cfg.n, raw=raw, max_atoms=get_settings().max_atoms)
    T = bounds.resolve_T(cfg.T, cfg.c_T, beta3, cfg.n)
    logger.debug(f"{cfg.command}: {cf.label} n={cfg.n} beta3={beta3:.6g} T={T:.6g}")
    return cf, T


def _emit(reports: Sequence, fmt: str, title: str) -> None:
    if fmt == "table":
        print_table(reports, title)
    else:
        click.echo(render(reports, fmt))


def _fail_if_escaped(reports: Sequence) -> None:
    escaped = [r.x for r in reports if r.contains is False]
    if escaped:
        raise AuditFailure(f"exact value outside the computed interval at x = {escaped}")


class ExitCodeGroup(click.Group):
    """Maps library errors to exit codes: 1 usage, 2 numeric failure, 3 audit failure."""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except click.UsageError as e:
            e.show()
            ctx.exit(1)
        except BoundError as e:
            click.echo(f"Error: {e}", err=True)
            ctx.exit(e.exit_code)


dist_option = click.option("--dist", required=True, help="rademacher | bernoulli:p | point:c | atoms:x,p;... | normal")
n_option = click.option("--n", "n", type=click.IntRange(min=1), default=1, show_default=True)
T_option = click.option("--T", "T", type=float, default=None, help="smoothing parameter T")
cT_option = click.option("--cT", "c_T", type=float, default=None, help="T = cT sqrt(n)/beta3 (default 1/sqrt(3))")
x_option = click.option("--x", "x", type=float, default=None)
grid_option = click.option("--x-grid", "x_grid", default=None, help="start:stop:step, inclusive")
tol_option = click.option("--tol", type=float, default=None, help="absolute tolerance (default BEBOUND_TOL)")
format_option = click.option("--format", "fmt", type=FORMATS, default="json", show_default=True)


@click.group(cls=ExitCodeGroup)
@click.option("--log-level", default=None, help="override BEBOUND_LOG_LEVEL")
def cli(log_level: Optional[str]):
    """Computable Berry-Esseen and Prawitz smoothing bounds."""
    configure_logging(log_level)


@cli.command()
@tol_option
@format_option
def constants(tol, fmt):
    """Filter constants, correction coefficients, psi samples and the literature table."""
    entries = bounds.constants_table(tol)
    if fmt == "json":
        payload = {e.name: e.value for e in entries}
        payload["provenance"] = {e.name: e.provenance for e in entries}
        click.echo(json.dumps(payload, indent=2))
    else:
        _emit(entries, fmt, "constants")


@cli.command("cdf-bounds")
@dist_option
@n_option
@T_option
@cT_option
@x_option
@grid_option
@tol_option
@click.option("--reflect", is_flag=True, help="lower bound through X -> -X")
@click.option("--raw", is_flag=True, help="use the distribution as given, without standardizing")
@format_option
def cdf_bounds_command(dist, n, T, c_T, x, x_grid, tol, reflect, raw, fmt):
    """Prawitz sandwich lower <= F(x-) <= F(x+) <= upper over x."""
    cfg = RunConfig("cdf-bounds", dist=dist, n=n, T=T, c_T=c_T, xs=_points(x, x_grid), tol=tol, fmt=fmt)
    cf, T = _load(cfg, raw)
    producer = bounds.cdf_bounds_by_reflection if reflect else bounds.cdf_bounds
    reports = bounds.evaluate_grid(lambda point: producer(cf, 1.0, point, T, tol=cfg.tol), cfg.xs)
    _emit(reports, cfg.fmt, "cdf bounds")
    _fail_if_escaped(reports)


@cli.command("tail-bounds")
@dist_option
@n_option
@click.option("--k", type=click.IntRange(min=1), default=3, show_default=True)
@click.option("--mode", type=click.Choice(["exact-abs", "surrogate"]), default="exact-abs", show_default=True)
@click.option("--p", type=float, default=None, help="correction exponent (surrogate mode)")
@T_option
@cT_option
@x_option
@grid_option
@tol_option
@click.option("--raw", is_flag=True, help="use the distribution as given, without standardizing")
@format_option
def tail_bounds_command(dist, n, k, mode, p, T, c_T, x, x_grid, tol, raw, fmt):
    """Two-sided bounds on x^k P(X >= x) and x^k P(X > x)."""
    cfg = RunConfig("tail-bounds", dist=dist, n=n, k=k, p=p, T=T, c_T=c_T, xs=_points(x, x_grid), tol=tol, fmt=fmt)
    if any(point < 0 for point in cfg.xs):
        raise DomainError("tail bounds need x >= 0")
    cf, T = _load(cfg, raw)
    source = cf.law if mode == "exact-abs" and isinstance(cf.law, DiscreteDist) else cf
    reports = bounds.evaluate_grid(
        lambda point: bounds.tail_moment_bound(source, cfg.k, point, T, mode=mode, p=cfg.p, tol=cfg.tol), cfg.xs
    )
    _emit(reports, cfg.fmt, "tail-moment bounds")
    _fail_if_escaped(reports)


@cli.command("nagaev-audit")
@dist_option
@n_option
@click.option("--cnu", "c_nu", type=float, default=bounds.C_NU_SMALL_N, show_default=True)
@click.option("--z-grid", "z_grid", default=None, help="start:stop:step (default: [0, 4] plus [2, 3.5])")
@format_option
def nagaev_audit_command(dist, n, c_nu, z_grid, fmt):
    """Exact Delta profile against c_nu beta3 / ((1 + z^3) sqrt(n)), with the derivation record."""
    law = parse_dist_spec(dist)
    if not isinstance(law, DiscreteDist):
        raise DomainError("nagaev-audit needs a discrete distribution")
    grid = parse_grid(z_grid) if z_grid else None
    check = bounds.nagaev_audit(law, n, c_nu=c_nu, z_grid=grid)
    _emit([check], fmt, "nagaev audit")
    if not check.passed:
        raise AuditFailure(f"max normalized Delta {check.observed:.6g} exceeds c_nu = {c_nu}")


@cli.command("delta-profile")
@dist_option
@n_option
@click.option("--z-grid", "z_grid", default=None, help="start:stop:step (default: [0, 4] plus [2, 3.5])")
@format_option
def delta_profile_command(dist, n, z_grid, fmt):
    """Delta(z) = |P(S > Bz) - P(Z > z)| and its normalized values."""
    law = parse_dist_spec(dist)
    if not isinstance(law, DiscreteDist):
        raise DomainError("delta-profile needs a discrete distribution")
    profile = oracle.delta_profile(law, n, parse_grid(z_grid) if z_grid else None)
    _emit([profile], fmt, "delta profile")


@cli.command()
@x_option
@grid_option
@tol_option
@format_option
def psi(x, x_grid, tol, fmt):
    """psi(x) = x^2 E|Z_-|^3 / (|Z_-| + x)^2."""
    reports = []
    for point in _points(x, x_grid):
        value, error = bounds.psi_with_error(point, tol)
        reports.append(PsiReport(x=point, psi=value, abs_error=error))
    _emit(reports, fmt, "psi")


@cli.command("e-rat")
@dist_option
@n_option
@x_option
@grid_option
@format_option
def e_rat_command(dist, n, x, x_grid, fmt):
    """Moment chain for E |X_-|^3 / (|X_-| + x)^2."""
    law = parse_dist_spec(dist)
    if not isinstance(law, DiscreteDist):
        raise DomainError("e-rat needs a discrete distribution")
    reports = [bounds.e_rat_bounds(law, point, n) for point in _points(x, x_grid)]
    _emit(reports, fmt, "E-ratio chain")
    broken = [r.x for r in reports if not r.chain_holds]
    if broken:
        raise AuditFailure(f"moment chain violated at x = {broken}")


@cli.command("filter-inspect")
@click.option("--name", default="prawitz", show_default=True)
@click.option("--x", "xs", type=float, multiple=True, help="kernel residual points, |x| >= 1 (default 50, 500)")
@format_option
def filter_inspect(name, xs, fmt):
    """Filter conditions, c_{2,p} constants and kernel residuals."""
    filt = get_filter(name)
    validation = validate_filter(filt)
    points = xs or (50.0, 500.0)
    report = FilterReport(
        filter=filt.name,
        kappa=filt.kappa,
        p_max=filt.p_max,
        support_ok=validation.support_ok,
        parity_max_error=validation.parity_max_error,
        l1_bounded=validation.l1_bounded,
        c2p={f"{p:g}": c2p_constant(p, filt).value for p in (0.5, 1.0, 2.0) if p <= filt.p_max},
        kernel_residuals={f"{point:g}": kernel_residual(filt, point) for point in points},
    )
    _emit([report], fmt, "filter")


@cli.command()
@click.option("--matrix", type=click.Path(path_type=Path), default=None, help="audit matrix YAML")
@click.option("--output-dir", type=click.Path(path_type=Path), default=Path("outputs"), show_default=True)
def audit(matrix, output_dir):
    """Run the audit matrix and write JSON/CSV summaries; exit 3 on any violation."""
    from bebound.audit import AuditPipeline

    summary = AuditPipeline(matrix_path=matrix, output_dir=output_dir).run()
    click.echo(json.dumps(summary, indent=2))
    if summary["violations"] or summary["errors"]:
        raise AuditFailure(f"{summary['violations']} violations, errors in {summary['errors']}; "
                           f"see {summary['report_path']}")


def main() -> None:
    cli(prog_name="bebound")


if __name__ == "__main__":
    main()
