"""
Command-line front end.

    gaussres sweep --state correlated-thermal --n0 100 --gamma 0.7 --phi 3.14159 \
        --kappa 0.01 --d-min 0.001 --d-max 6 --points 200 --with-bound --out coherence.csv
    gaussres validate --suite all
    gaussres bound --n0 1 --kappa 0.001 --d-min 0.01 --d-max 5 --points 50

Exit codes: 0 success, 2 invalid spec, 3 engine error, 4 validation failure.
"""

import argparse
import io
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, replace

import numpy as np
import tomli

from . import __version__
from .oracle import OracleUncertainError, oracle_qfi
from .psf import D_MIN_FACTOR, GaussianPsf, overlap_delta
from .qfi import DivergentTermError, qfi, qfi_coherent_closed_form, qfi_upper_bound
from .sources import SourceSpec, Variant
from .symplectic import UnphysicalStateError
from .validation import SUITES, format_report, run_validation

FORMAT_VERSION = 1

EXIT_OK = 0
EXIT_INVALID_SPEC = 2
EXIT_ENGINE_ERROR = 3
EXIT_VALIDATION_FAILED = 4


class InvalidSpecError(ValueError):
    pass


class EngineError(RuntimeError):
    pass


@dataclass(frozen=True)
class SweepSpec:
    """A separation sweep. Lengths (w, d_min, d_max) share one unit."""

    state: str = "correlated-thermal"
    n0: float = 1.0
    gamma: float = 0.0
    phi: float = 0.0
    theta: float = 0.0
    kappa: float = 0.01
    w: float = 1.0
    d_min: float = 1e-3
    d_max: float = 6.0
    points: int = 100
    log_grid: bool = False
    include_bound: bool = False
    oracle_stride: int = 0

    def validate(self):
        try:
            Variant(self.state)
        except ValueError:
            raise InvalidSpecError(f"unknown state {self.state!r}") from None
        if not self.w > 0:
            raise InvalidSpecError(f"w must be positive, got {self.w}")
        if self.d_min < D_MIN_FACTOR * self.w * (1 - 1e-12):
            raise InvalidSpecError(f"d_min = {self.d_min} is below {D_MIN_FACTOR} w")
        if not self.d_max > self.d_min:
            raise InvalidSpecError("d_max must exceed d_min")
        if int(self.points) != self.points or self.points < 2:
            raise InvalidSpecError(f"points must be an integer >= 2, got {self.points}")
        if self.oracle_stride < 0:
            raise InvalidSpecError("oracle stride must be non-negative")
        if not 0 < self.kappa < 1:
            raise InvalidSpecError(f"kappa must lie in (0, 1), got {self.kappa}")
        psf = GaussianPsf(self.w)
        if self.kappa * (1 + overlap_delta(psf, self.d_min)) > 1:
            raise InvalidSpecError("kappa (1 + delta) exceeds 1 on the grid")
        try:
            self.source().state()
        except (ValueError, UnphysicalStateError) as exc:
            raise InvalidSpecError(str(exc)) from None
        return self

    def source(self):
        variant = Variant(self.state)
        if variant is Variant.SQUEEZED_PAIR:
            return SourceSpec.squeezed_pair(self.n0, self.theta)
        if variant is Variant.COHERENT:
            return SourceSpec.coherent(self.n0, self.phi)
        return SourceSpec(variant, self.n0, self.gamma, self.phi)

    def grid(self):
        if self.log_grid:
            return np.geomspace(self.d_min, self.d_max, int(self.points))
        return np.linspace(self.d_min, self.d_max, int(self.points))


# config file sections and the SweepSpec fields they hold
_CONFIG_LAYOUT = {
    "source": ("state", "n0", "gamma", "phi", "theta"),
    "channel": ("kappa", "w"),
    "grid": ("d_min", "d_max", "points", "log_grid"),
    "output": ("include_bound", "oracle_stride"),
}


def load_config(path):
    """Read a TOML scenario file into a dict of SweepSpec fields."""
    try:
        with open(path, "rb") as fh:
            raw = tomli.load(fh)
    except (OSError, tomli.TOMLDecodeError) as exc:
        raise InvalidSpecError(f"cannot read config {path}: {exc}") from None
    version = raw.pop("format_version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise InvalidSpecError(f"unsupported config format_version {version}")
    fields = {}
    for section, keys in _CONFIG_LAYOUT.items():
        table = raw.pop(section, {})
        unknown = set(table) - set(keys)
        if unknown:
            raise InvalidSpecError(f"unknown keys in [{section}]: {sorted(unknown)}")
        fields.update(table)
    if raw:
        raise InvalidSpecError(f"unknown config entries: {sorted(raw)}")
    return fields


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    columns: tuple
    rows: np.ndarray  # oracle entries are nan where not sampled


def _engine_row(spec, psf, source, d):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        res = qfi(source, spec.kappa, psf, d)
    row = [res.f_total, res.f_cov, res.f_mean]
    if spec.include_bound:
        row.append(qfi_upper_bound(spec.n0, spec.kappa, psf, d))
    return row


def run_sweep(spec, threads=1):
    """Evaluate the QFI on the grid; rows come back in ascending d.

    Engine points are spread over ``threads`` workers. Oracle samples (every
    ``oracle_stride``-th row, 0 for none) run serially because the
    arbitrary-precision context is process-global.
    """
    spec.validate()
    psf = GaussianPsf(spec.w)
    source = spec.source()
    grid = spec.grid()
    w2 = spec.w ** 2

    def task(i):
        try:
            return _engine_row(spec, psf, source, grid[i])
        except (DivergentTermError, ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
            raise EngineError(f"row {i} (d/w = {grid[i] / spec.w:.17g}): {exc}") from exc

    with ThreadPoolExecutor(max_workers=max(1, int(threads))) as pool:
        values = list(pool.map(task, range(len(grid))))

    columns = ["d_over_w", "f_total_w2", "f_cov_w2", "f_mean_w2"]
    if spec.include_bound:
        columns.append("bound_w2")
    rows = [[d / spec.w] + [v * w2 for v in vals] for d, vals in zip(grid, values)]
    if spec.oracle_stride:
        columns.append("oracle_w2")
        for i, row in enumerate(rows):
            if i % spec.oracle_stride:
                row.append(np.nan)
                continue
            try:
                row.append(oracle_qfi(source.state(), spec.kappa, psf, grid[i]) * w2)
            except (OracleUncertainError, ValueError) as exc:
                raise EngineError(f"oracle at row {i} (d/w = {grid[i] / spec.w:.17g}): {exc}") from exc
    columns.append("f_total_w2_per_n0")
    for row in rows:
        row.append(row[1] / spec.n0 if spec.n0 > 0 else np.nan)
    return SweepResult(spec=spec, columns=tuple(columns), rows=np.array(rows, dtype=float))


def _fmt(x):
    return "" if np.isnan(x) else f"{x:.17g}"


def write_csv(result, fh, command="sweep"):
    fh.write(f"# gaussres {command}\n")
    fh.write(f"# format_version = {FORMAT_VERSION}\n")
    fh.write(f"# version = {__version__}\n")
    for key, value in asdict(result.spec).items():
        fh.write(f"# {key} = {value!r}\n")
    fh.write(",".join(result.columns) + "\n")
    for row in result.rows:
        fh.write(",".join(_fmt(x) for x in row) + "\n")


def read_csv(path):
    """Parse a sweep file back into (header dict, column names, rows)."""
    header, columns, rows = {}, None, []
    with open(path) as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("#"):
                if " = " in line:
                    key, value = line[2:].split(" = ", 1)
                    header[key] = value
            elif columns is None:
                columns = line.split(",")
            elif line:
                rows.append([float(x) if x else np.nan for x in line.split(",")])
    return header, columns, np.array(rows)


def run_bound(spec):
    """Bound and the two phase-optimized coherent QFIs over the grid."""
    spec.validate()
    psf = GaussianPsf(spec.w)
    w2 = spec.w ** 2
    rows = []
    for d in spec.grid():
        rows.append([
            d / spec.w,
            qfi_upper_bound(spec.n0, spec.kappa, psf, d) * w2,
            qfi_coherent_closed_form(spec.n0, spec.kappa, 0.0, psf, d) * w2,
            qfi_coherent_closed_form(spec.n0, spec.kappa, np.pi, psf, d) * w2,
        ])
    cols = ("d_over_w", "bound_w2", "coherent_phi0_w2", "coherent_phipi_w2")
    return SweepResult(spec=spec, columns=cols, rows=np.array(rows))


def _add_grid_args(p):
    p.add_argument("--config", help="TOML scenario file; flags override its values")
    p.add_argument("--n0", type=float)
    p.add_argument("--kappa", type=float)
    p.add_argument("--w", type=float)
    p.add_argument("--d-min", type=float)
    p.add_argument("--d-max", type=float)
    p.add_argument("--points", type=int)
    p.add_argument("--log-grid", action="store_true", default=None)
    p.add_argument("--out", help="output path (default stdout)")


def build_parser():
    parser = argparse.ArgumentParser(prog="gaussres", description=__doc__.split("\n\n")[0].strip())
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    sw = sub.add_parser("sweep", help="QFI versus separation")
    _add_grid_args(sw)
    sw.add_argument("--state", choices=[v.value for v in Variant])
    sw.add_argument("--gamma", type=float)
    sw.add_argument("--phi", type=float, help="radians")
    sw.add_argument("--theta", type=float, help="radians")
    sw.add_argument("--with-bound", dest="include_bound", action="store_true", default=None)
    sw.add_argument("--with-oracle", dest="oracle_stride", type=int, metavar="STRIDE",
                    help="oracle QFI on every STRIDE-th row")
    sw.add_argument("--threads", type=int, default=1)

    bd = sub.add_parser("bound", help="upper bound and coherent QFIs versus separation")
    _add_grid_args(bd)

    va = sub.add_parser("validate", help="run self-check suites")
    va.add_argument("--suite", choices=SUITES + ("all",), default="all")
    va.add_argument("--transform", choices=("congruence", "similarity"), default="congruence",
                    help="derivative projection used by the engine (for mutation testing)")
    va.add_argument("--tilde-index", choices=("kj", "jk"), default="kj")
    return parser


def spec_from_args(args):
    fields = load_config(args.config) if args.config else {}
    for name in SweepSpec.__dataclass_fields__:
        value = getattr(args, name, None)
        if value is not None:
            fields[name] = value
    try:
        spec = replace(SweepSpec(), **fields)
    except TypeError as exc:
        raise InvalidSpecError(str(exc)) from None
    return spec.validate()


def _emit(result, out, command):
    buf = io.StringIO()
    write_csv(result, buf, command)
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.command == "validate":
        checks = run_validation(args.suite, transform=args.transform, tilde_index=args.tilde_index)
        print(format_report(checks))
        return EXIT_OK if all(c.passed for c in checks) else EXIT_VALIDATION_FAILED
    try:
        spec = spec_from_args(args)
        if args.command == "sweep":
            result = run_sweep(spec, threads=args.threads)
        else:
            result = run_bound(spec)
    except InvalidSpecError as exc:
        print(f"invalid spec: {exc}", file=sys.stderr)
        return EXIT_INVALID_SPEC
    except (EngineError, ZeroDivisionError) as exc:
        print(f"engine error: {exc}", file=sys.stderr)
        return EXIT_ENGINE_ERROR
    _emit(result, args.out, args.command)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
