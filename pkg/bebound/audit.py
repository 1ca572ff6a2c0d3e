"""
Audit pipeline
Runs every bound producer against exact oracles over a YAML matrix of distributions, T values
and grids; writes a JSON summary and a CSV of all evaluations
"""

import json
import logging
from concurrent.futures import ThreadPoolExecutor, as_completed
from datetime import datetime
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
import yaml

from bebound import bounds
from bebound.cf_core import (
    CharFn,
    DiscreteDist,
    load_source,
    make_standardized_iid_sum,
    parse_dist_spec,
    parse_grid,
)
from bebound.config import configure_logging, get_settings
from bebound.errors import BoundError

logger = logging.getLogger(__name__)

Job = Tuple[str, Callable[[], Dict[str, Any]]]


def default_matrix() -> Dict[str, Any]:
    """Matrix used when no YAML file is available."""
    return {
        "families": [
            {"dist": "point:0", "raw": True, "n": [1]},
            {"dist": "rademacher", "n": [1, 4, 9, 16]},
            {"dist": "bernoulli:0.3", "n": [1, 4, 9]},
            {"dist": "normal", "n": [1]},
        ],
        "cdf": {"T": [5, 10, 30], "x_grid": "-4:4:0.2"},
        "tail": {"k": 3, "T": [10, 30], "x_grid": "0:4:0.5", "modes": ["exact_abs", "surrogate"]},
        "fix": {"random_dists": 200, "atoms": 5, "k": 3, "p": [1, 2], "x": [0.5, 1.0, 2.0, 3.5], "T": 10.0,
                "seed": 7},
        "nagaev": [{"dist": "rademacher", "n": [1, 2]}, {"dist": "bernoulli:0.1", "n": [1, 4, 9, 16]}],
        "rosenthal": [{"dist": "rademacher", "n_max": 64}, {"dist": "bernoulli:0.3", "n_max": 64}],
    }


def load_matrix(path: Optional[Path]) -> Dict[str, Any]:
    """Load the audit matrix with error handling; fall back to the default matrix."""
    matrix_file = Path(path) if path is not None else get_settings().audit_matrix
    try:
        if matrix_file.exists():
            with open(matrix_file, 'r', encoding='utf-8') as f:
                data = yaml.safe_load(f)
                logger.info(f"Loaded audit matrix from {matrix_file}")
                return {**default_matrix(), **(data or {})}
        logger.warning(f"Audit matrix not found: {matrix_file}; using defaults")
    except yaml.YAMLError as e:
        logger.error(f"Error parsing audit matrix {matrix_file}: {e}; using defaults")
    return default_matrix()


def random_dist(rng: np.random.Generator, atoms: int) -> DiscreteDist:
    xs = np.round(rng.uniform(-3.0, 3.0, atoms), 6)
    ps = rng.dirichlet(np.ones(atoms))
    return DiscreteDist.from_atoms(zip(xs, ps), label=f"random[{atoms}]")


class AuditPipeline:
    """
    Checks the sandwiches, the correction chain, the small-n Nagaev bound and the Rosenthal
    inequality; each check is one job in a thread pool.
    """

    def __init__(self, matrix_path: Optional[Path] = None, output_dir: Path = Path('outputs'),
                 max_workers: Optional[int] = None):
        self.matrix = load_matrix(matrix_path)
        self.output_dir = Path(output_dir)
        self.max_workers = max_workers or get_settings().max_workers
        self.tol = get_settings().tol
        self.setup_directories()
        logger.info("Audit pipeline initialized")

    def setup_directories(self):
        """Setup required directory structure"""
        for directory in (self.output_dir / 'reports', Path('logs')):
            directory.mkdir(parents=True, exist_ok=True)

    # -- sources -------------------------------------------------------------

    def _sources(self) -> List[Tuple[str, CharFn, float]]:
        """(label, c.f., beta3) for every family member."""
        out = []
        for family in self.matrix["families"]:
            raw = bool(family.get("raw", False))
            for n in family.get("n", [1]):
                cf, beta3 = load_source(family["dist"], n, raw=raw)
                out.append((family["dist"] if raw else f"{family['dist']}*{n}", cf, beta3))
        return out

    # -- checks --------------------------------------------------------------

    def check_cdf(self, label: str, cf: CharFn) -> Dict[str, Any]:
        rows = []
        for T in self.matrix["cdf"]["T"]:
            for x in parse_grid(self.matrix["cdf"]["x_grid"]):
                report = bounds.cdf_bounds(cf, 1.0, x, float(T), tol=self.tol)
                rows.append({"check": "cdf", "dist": label, "T": T, "x": x, "lower": report.lower,
                             "upper": report.upper, **report.exact, "ok": report.contains})
        return self._result(f"cdf:{label}", rows)

    def check_tail(self, label: str, cf: CharFn) -> Dict[str, Any]:
        spec = self.matrix["tail"]
        k = int(spec["k"])
        rows = []
        for T in spec["T"]:
            for x in parse_grid(spec["x_grid"]):
                radii = {}
                for mode in spec["modes"]:
                    if mode == "exact_abs" and not isinstance(cf.law, DiscreteDist):
                        continue
                    report = bounds.tail_moment_bound(cf, k, x, float(T), mode=mode, tol=self.tol)
                    radii[mode] = report.radius
                    rows.append({"check": f"tail:{mode}", "dist": label, "T": T, "x": x, "lower": report.lower,
                                 "upper": report.upper, **report.exact, "ok": report.contains})
                if len(radii) == 2:
                    dominated = radii["surrogate"] >= radii["exact_abs"] - 2 * self.tol
                    rows.append({"check": "tail:dominance", "dist": label, "T": T, "x": x,
                                 "lower": radii["exact_abs"], "upper": radii["surrogate"], "ok": dominated})
        return self._result(f"tail:{label}", rows)

    def check_fix(self) -> Dict[str, Any]:
        spec = self.matrix["fix"]
        rng = np.random.default_rng(spec["seed"])
        k, T = int(spec["k"]), float(spec["T"])
        rows = []
        for index in range(int(spec["random_dists"])):
            dist = random_dist(rng, int(spec["atoms"]))
            for x in spec["x"]:
                swap, swap_error = bounds.surrogate_swap_error(dist, k, float(x), T, tol=self.tol)
                for p in spec["p"]:
                    terms = bounds.fix_correction(dist, k, float(p), float(x), T)
                    ok = (terms.exact_term <= terms.moment_min_term * (1 + 1e-12)
                          and swap <= terms.exact_term + swap_error + 2 * self.tol)
                    rows.append({"check": "fix", "dist": index, "T": T, "x": x, "p": p, "swap": swap,
                                 "lower": terms.exact_term, "upper": terms.moment_min_term, "ok": ok})
        return self._result("fix", rows)

    def check_nagaev(self) -> Dict[str, Any]:
        rows = []
        for family in self.matrix["nagaev"]:
            law = parse_dist_spec(family["dist"])
            for n in family["n"]:
                check = bounds.nagaev_audit(law, n)
                rows.append({"check": "nagaev", "dist": family["dist"], "n": n, "x": check.x,
                             "applicable": check.applicable, "lower": check.observed,
                             "upper": bounds.C_NU_SMALL_N, "ok": check.passed})
        return self._result("nagaev", rows)

    def check_rosenthal(self) -> Dict[str, Any]:
        rows = []
        for family in self.matrix["rosenthal"]:
            base = parse_dist_spec(family["dist"])
            beta3 = base.standardized().beta3
            for n in range(1, int(family["n_max"]) + 1):
                third = make_standardized_iid_sum(base, n).law.abs_moment(3)
                bound = bounds.rosenthal_ub(beta3, n)
                rows.append({"check": "rosenthal", "dist": family["dist"], "n": n, "lower": third,
                             "upper": bound, "ok": third <= bound})
        return self._result("rosenthal", rows)

    @staticmethod
    def _result(name: str, rows: List[Dict[str, Any]]) -> Dict[str, Any]:
        violations = sum(1 for row in rows if not row["ok"])
        return {"check": name, "status": "pass" if violations == 0 else "violation",
                "evaluations": len(rows), "violations": violations, "rows": rows}

    # -- orchestration ---------------------------------------------------------

    def jobs(self) -> List[Job]:
        jobs: List[Job] = []
        for label, cf, _ in self._sources():
            jobs.append((f"cdf:{label}", lambda label=label, cf=cf: self.check_cdf(label, cf)))
            jobs.append((f"tail:{label}", lambda label=label, cf=cf: self.check_tail(label, cf)))
        jobs.append(("fix", self.check_fix))
        jobs.append(("nagaev", self.check_nagaev))
        jobs.append(("rosenthal", self.check_rosenthal))
        return jobs

    def run(self) -> Dict[str, Any]:
        """Run every job and write the reports."""
        logger.info(f"Starting audit run (workers={self.max_workers})")
        start_time = datetime.now()
        results = {
            'batch_id': start_time.strftime('%Y%m%d_%H%M%S'),
            'start_time': start_time.isoformat(),
            'checks': {},
        }

        with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
            future_to_check = {executor.submit(job): name for name, job in self.jobs()}
            for future in as_completed(future_to_check):
                name = future_to_check[future]
                try:
                    results['checks'][name] = future.result()
                except BoundError as e:
                    logger.error(f"Audit check {name} failed: {e}")
                    results['checks'][name] = {"check": name, "status": "error", "error": str(e),
                                               "evaluations": 0, "violations": 0, "rows": []}

        end_time = datetime.now()
        checks = results['checks']
        summary = {
            'batch_id': results['batch_id'],
            'total_checks': len(checks),
            'evaluations': sum(c['evaluations'] for c in checks.values()),
            'violations': sum(c['violations'] for c in checks.values()),
            'errors': sorted(name for name, c in checks.items() if c['status'] == 'error'),
            'failed_checks': sorted(name for name, c in checks.items() if c['status'] == 'violation'),
            'total_time': (end_time - start_time).total_seconds(),
        }
        summary['report_path'] = str(self.generate_report(results, summary))
        logger.info(f"Audit complete: {summary['evaluations']} evaluations, {summary['violations']} violations, "
                    f"{len(summary['errors'])} errors in {summary['total_time']:.1f}s")
        return summary

    def generate_report(self, results: Dict[str, Any], summary: Dict[str, Any]) -> Path:
        """Write the JSON summary and the CSV of every evaluation."""
        report_dir = self.output_dir / 'reports'
        rows = [row for name in sorted(results['checks']) for row in results['checks'][name]['rows']]
        csv_path = report_dir / f"audit_{results['batch_id']}.csv"
        pd.DataFrame(rows).to_csv(csv_path, index=False)

        json_path = report_dir / f"audit_{results['batch_id']}.json"
        checks = {name: {key: value for key, value in check.items() if key != 'rows'}
                  for name, check in sorted(results['checks'].items())}
        with open(json_path, 'w') as f:
            json.dump({'summary': summary, 'checks': checks, 'csv': str(csv_path)}, f, indent=2, default=str)

        logger.info(f"Audit report generated: {json_path}")
        return json_path


def main() -> int:
    configure_logging(log_file=Path('logs') / 'audit.log')
    summary = AuditPipeline().run()
    return 3 if summary['violations'] or summary['errors'] else 0


if __name__ == "__main__":
    raise SystemExit(main())
