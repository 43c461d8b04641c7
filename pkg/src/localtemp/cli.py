"""Command line front end.

Subcommands: nmin (single-point criteria query), sweep (temperature sweep as
CSV), figure (fixed parameter sets behind the standard log-log plots),
materials (Debye-temperature database and minimal physical lengths), oracle
(dense verification drivers). Kelvin and angstrom are converted here, once;
everything below the argument layer works in dimensionless ratios.

Exit codes: 0 success, 1 invalid parameters or files, 2 numerical failure
(quadrature or window construction), 3 unsupported Ising coupling case.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from contextlib import nullcontext
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .canonical import (
    AccuracyParams,
    EmptyIntervalError,
    GroupStatistics,
    InconsistentWindowError,
    rho_diag,
)
from .specfun import QuadratureError
from . import harmonic, ising, oracle
from .ising import IsingModel, UnsupportedCouplingError

__all__ = [
    "MaterialRecord",
    "SweepRow",
    "cmd_nmin",
    "cmd_sweep",
    "cmd_figure",
    "cmd_materials",
    "cmd_oracle",
    "main",
    "entrypoint",
]

_ANGSTROM = 1e-10


@dataclass(frozen=True)
class MaterialRecord:
    name: str
    theta_kelvin: float
    a0_angstrom: float

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("material name must be nonempty")
        if not self.theta_kelvin > 0 or not self.a0_angstrom > 0:
            raise ValueError(f"material {self.name!r} needs positive theta and a0")


@dataclass(frozen=True)
class SweepRow:
    t_ratio: float
    n_cond_const: int
    n_linearity: int
    n_min: int
    binding: str
    l_min_m: float | None = None

    def __post_init__(self) -> None:
        if self.n_min != max(self.n_cond_const, self.n_linearity):
            raise ValueError("n_min must be the max of the two bounds")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on bad flags, but exit 2 is reserved here
    for numerical failures, so route usage problems through exit code 1."""

    def error(self, message: str) -> None:  # type: ignore[override]
        raise _UsageError(message)


def _out_stream(path: str | None):
    if path:
        return open(path, "w", encoding="utf-8")
    return nullcontext(sys.stdout)


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_csv(fh, comments: list[str], header: list[str], rows: list[list]) -> None:
    for line in comments:
        fh.write(f"# {line}\n")
    fh.write(",".join(header) + "\n")
    for row in rows:
        fh.write(",".join(_fmt(v) for v in row) + "\n")


def _acc_from_args(args) -> AccuracyParams:
    return AccuracyParams(alpha=args.alpha, delta=args.delta)


def _ising_from_args(args) -> IsingModel:
    kl_given = args.k_param is not None or args.l_param is not None
    j_given = args.jx is not None or args.jy is not None
    if kl_given and j_given:
        raise ValueError("give either --K/--L or --jx/--jy, not both")
    if j_given:
        return IsingModel.from_couplings(args.b_field, args.jx or 0.0, args.jy or 0.0)
    return IsingModel.from_kl(args.b_field, args.k_param or 0.0, args.l_param or 0.0)


# ---------------------------------------------------------------------------
# materials


def _load_materials(path: str | None) -> list[MaterialRecord]:
    if path is None:
        text = resources.files("localtemp").joinpath("data/materials.json").read_text()
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    data = json.loads(text)
    if not isinstance(data, list):
        raise ValueError("materials file must hold a JSON array")
    records = []
    for entry in data:
        if not isinstance(entry, dict):
            raise ValueError("materials file entries must be objects")
        try:
            records.append(MaterialRecord(**entry))
        except TypeError as exc:
            raise ValueError(f"malformed material entry: {exc}") from exc
    return records


def _material_by_name(records: list[MaterialRecord], name: str) -> MaterialRecord:
    for record in records:
        if record.name == name:
            return record
    known = ", ".join(r.name for r in records)
    raise ValueError(f"unknown material {name!r} (known: {known})")


# ---------------------------------------------------------------------------
# nmin


def cmd_nmin(args) -> int:
    acc = _acc_from_args(args)
    if args.chain == "harmonic":
        report = harmonic.nmin(args.t_over_theta, acc)
        t_label, t_value = "t_over_theta", args.t_over_theta
        l_min = None
        if args.name:
            material = _material_by_name(_load_materials(args.file), args.name)
            l_min = report.n_min * material.a0_angstrom * _ANGSTROM
    else:
        model = _ising_from_args(args)
        report = ising.nmin(args.t_over_b, acc, model)
        t_label, t_value = "t_over_b", args.t_over_b
        l_min = None

    payload = {
        t_label: t_value,
        "n_cond_const": report.n_cond_const,
        "n_linearity": report.n_linearity,
        "n_min": report.n_min,
        "binding": report.binding.value,
        "c1_estimate": report.c1_estimate,
        "intensive": report.intensive,
    }
    if l_min is not None:
        payload["l_min_m"] = l_min

    with _out_stream(args.out) as fh:
        if args.format == "json":
            fh.write(json.dumps(payload, indent=2) + "\n")
        elif args.format == "csv":
            _write_csv(
                fh,
                [f"localtemp nmin {args.chain}", f"alpha={args.alpha} delta={args.delta}"],
                list(payload),
                [list(payload.values())],
            )
        else:
            fh.write(f"{args.chain} chain at {t_label} = {_fmt(t_value)}\n")
            fh.write(f"  n_cond_const = {report.n_cond_const}\n")
            fh.write(f"  n_linearity  = {report.n_linearity}\n")
            fh.write(f"  n_min        = {report.n_min}  (binding: {report.binding.value})\n")
            fh.write(
                f"  c1_estimate  = {report.c1_estimate:.6e}"
                f"  (intensive: {'yes' if report.intensive else 'no'})\n"
            )
            if l_min is not None:
                fh.write(f"  l_min        = {_fmt(l_min)} m\n")
    return 0


# ---------------------------------------------------------------------------
# sweep


def _sweep_grid(args) -> np.ndarray:
    if not args.tmin < args.tmax:
        raise ValueError("--tmin must be below --tmax")
    if args.points < 2:
        raise ValueError("--points must be at least 2")
    if args.log:
        if args.tmin <= 0:
            raise ValueError("logarithmic grid needs --tmin > 0")
        return np.geomspace(args.tmin, args.tmax, args.points)
    return np.linspace(args.tmin, args.tmax, args.points)


def cmd_sweep(args) -> int:
    acc = _acc_from_args(args)
    grid = _sweep_grid(args)
    a0_m = None
    if args.chain == "harmonic" and args.name:
        material = _material_by_name(_load_materials(args.file), args.name)
        a0_m = material.a0_angstrom * _ANGSTROM
    model = _ising_from_args(args) if args.chain == "ising" else None

    rows = []
    for t in grid:
        t = float(t)
        if model is None:
            report = harmonic.nmin(t, acc)
        else:
            report = ising.nmin(t, acc, model)
        rows.append(
            SweepRow(
                t_ratio=t,
                n_cond_const=report.n_cond_const,
                n_linearity=report.n_linearity,
                n_min=report.n_min,
                binding=report.binding.value,
                l_min_m=None if a0_m is None else report.n_min * a0_m,
            )
        )

    header = ["t_ratio", "n_cond_const", "n_linearity", "n_min", "binding"]
    if a0_m is not None:
        header.append("l_min_m")
    comments = [
        f"localtemp sweep {args.chain}",
        f"alpha={_fmt(args.alpha)} delta={_fmt(args.delta)} tmin={_fmt(args.tmin)}"
        f" tmax={_fmt(args.tmax)} points={args.points} log={args.log}",
    ]
    if model is not None:
        comments.append(
            f"B={_fmt(model.b_field)} K={_fmt(model.k_param)} L={_fmt(model.l_param)}"
            f" case={model.coupling_case.value}"
        )
    with _out_stream(args.out) as fh:
        if args.format == "json":
            fh.write(json.dumps([row.__dict__ for row in rows], indent=2) + "\n")
        else:
            table = [[getattr(row, key) for key in header] for row in rows]
            _write_csv(fh, comments, header, table)
    return 0


# ---------------------------------------------------------------------------
# figure


def _figure_curves(figure_id: str, acc: AccuracyParams):
    """Grid plus named raw-bound callables for one figure id."""
    if figure_id == "fig3":
        grid = np.geomspace(1e-4, 1e2, 200)
        curves = [
            ("cond_const", lambda t: harmonic.cond_const_bound(t, acc)),
            ("linearity", lambda t: harmonic.linearity_bound(t, acc)),
        ]
        return "t_over_theta", grid, curves
    if figure_id == "fig4":
        grid = np.geomspace(1e-2, 1e2, 200)
        weak = IsingModel.from_kl(1.0, 0.1, 0.1)
        strong = IsingModel.from_kl(1.0, 10.0, 10.0)
        curves = [
            ("cond_const_kl_0.1", lambda t: ising.cond_const_bound(t, acc, weak)),
            ("cond_const_kl_10", lambda t: ising.cond_const_bound(t, acc, strong)),
        ]
        return "t_over_b", grid, curves
    if figure_id == "fig5":
        grid = np.geomspace(1e-3, 1e3, 200)
        weak = IsingModel.from_kl(1.0, 0.0, 0.1)
        strong = IsingModel.from_kl(1.0, 0.0, 10.0)
        curves = [
            ("cond_const_l_0.1", lambda t: ising.cond_const_bound(t, acc, weak)),
            ("linearity_l_0.1", lambda t: ising.linearity_bound(t, acc, weak)),
            ("cond_const_l_10", lambda t: ising.cond_const_bound(t, acc, strong)),
            ("linearity_l_10", lambda t: ising.linearity_bound(t, acc, strong)),
        ]
        return "t_over_b", grid, curves
    if figure_id == "fig6":
        grid = np.geomspace(1e-3, 1e3, 200)
        weak = IsingModel.from_kl(1.0, 0.1, 0.0)
        strong = IsingModel.from_kl(1.0, 10.0, 0.0)
        curves = [
            ("isotropic_weak_k_0.1", lambda t: ising.isotropic_weak_bound(t, weak)),
            ("linearity_k_0.1", lambda t: ising.linearity_bound(t, acc, weak)),
            ("cond_const_k_10", lambda t: ising.cond_const_bound(t, acc, strong)),
            ("linearity_k_10", lambda t: ising.linearity_bound(t, acc, strong)),
        ]
        return "t_over_b", grid, curves
    raise ValueError(f"unknown figure id {figure_id!r}")


def cmd_figure(args) -> int:
    acc = AccuracyParams(alpha=10.0, delta=0.01)
    t_label, grid, curves = _figure_curves(args.id, acc)
    rows = []
    for t in grid:
        t = float(t)
        rows.append([t] + [fn(t) for _, fn in curves])
    header = [t_label] + [name for name, _ in curves]
    with _out_stream(args.out) as fh:
        if args.format == "json":
            payload = [dict(zip(header, row)) for row in rows]
            fh.write(json.dumps(payload, indent=2) + "\n")
        else:
            comments = [f"localtemp figure {args.id}", "alpha=10.0 delta=0.01"]
            _write_csv(fh, comments, header, rows)
    return 0


# ---------------------------------------------------------------------------
# materials


_MATERIALS_NOTE = (
    "note: commonly quoted length estimates for some materials (hot iron,"
    " carbon near room temperature) run about two orders of magnitude above"
    " these formula-derived values; see the README for discussion."
)


def cmd_materials(args) -> int:
    records = _load_materials(args.file)
    with _out_stream(args.out) as fh:
        if args.name is None:
            if args.format == "json":
                fh.write(json.dumps([r.__dict__ for r in records], indent=2) + "\n")
            elif args.format == "csv":
                _write_csv(
                    fh,
                    ["localtemp materials"],
                    ["name", "theta_kelvin", "a0_angstrom"],
                    [[r.name, r.theta_kelvin, r.a0_angstrom] for r in records],
                )
            else:
                for r in records:
                    fh.write(
                        f"{r.name}: Theta = {_fmt(r.theta_kelvin)} K,"
                        f" a0 = {_fmt(r.a0_angstrom)} A\n"
                    )
            return 0

        material = _material_by_name(records, args.name)
        if args.temp_kelvin is None:
            raise ValueError("--temp-kelvin is required with --name")
        if args.temp_kelvin <= 0:
            raise ValueError("--temp-kelvin must be positive")
        acc = _acc_from_args(args)
        t = args.temp_kelvin / material.theta_kelvin
        report = harmonic.nmin(t, acc)
        l_min = report.n_min * material.a0_angstrom * _ANGSTROM
        payload = {
            "name": material.name,
            "theta_kelvin": material.theta_kelvin,
            "a0_angstrom": material.a0_angstrom,
            "temp_kelvin": args.temp_kelvin,
            "t_over_theta": t,
            "n_cond_const": report.n_cond_const,
            "n_linearity": report.n_linearity,
            "n_min": report.n_min,
            "binding": report.binding.value,
            "l_min_m": l_min,
        }
        if args.format == "json":
            fh.write(json.dumps(payload, indent=2) + "\n")
        elif args.format == "csv":
            _write_csv(
                fh,
                [f"localtemp materials {material.name}"],
                list(payload),
                [list(payload.values())],
            )
        else:
            fh.write(
                f"{material.name}: Theta = {_fmt(material.theta_kelvin)} K,"
                f" a0 = {_fmt(material.a0_angstrom)} A\n"
            )
            fh.write(
                f"  T = {_fmt(args.temp_kelvin)} K  (T/Theta = {_fmt(t)})\n"
            )
            fh.write(f"  n_min = {report.n_min}  (binding: {report.binding.value})\n")
            fh.write(f"  l_min = {_fmt(l_min)} m\n")
            fh.write(_MATERIALS_NOTE + "\n")
    return 0


# ---------------------------------------------------------------------------
# oracle drivers


def _oracle_rows(args) -> tuple[list[str], list[list]]:
    model = _ising_from_args(args)
    if args.oracle_cmd == "spectrum":
        boundary = (
            oracle.Boundary.PERIODIC
            if args.boundary == "periodic"
            else oracle.Boundary.OPEN
        )
        h = oracle.build_hamiltonian(args.sites, model, boundary)
        dense = np.sort(np.linalg.eigvalsh(h))
        if boundary is oracle.Boundary.OPEN:
            formula = np.sort(
                [
                    ising.group_energy(
                        ising.GroupOccupations(
                            tuple((a >> l) & 1 for l in range(args.sites))
                        ),
                        model,
                    )
                    for a in range(2**args.sites)
                ]
            )
            deviation = float(np.max(np.abs(dense - formula)))
            return ["quantity", "value"], [
                ["sites", args.sites],
                ["boundary", "open"],
                ["max_spectrum_deviation", deviation],
            ]
        # periodic: parity sectors are not tracked; compare ground energy only
        dense_ground = float(dense[0]) / args.sites
        integral = ising.ground_energy_per_site(model)
        return ["quantity", "value"], [
            ["sites", args.sites],
            ["boundary", "periodic"],
            ["ground_per_site_dense", dense_ground],
            ["ground_per_site_integral", integral],
            ["deviation", abs(dense_ground - integral)],
        ]

    group_size = args.sites // args.groups
    if args.oracle_cmd == "moments":
        sys_ = oracle.DenseThermalSystem.solve(
            oracle.build_hamiltonian(args.sites, model), 0.0
        )
        pb = oracle.product_basis(args.sites, group_size, model)
        worst_eps = 0.0
        worst_mean = 0.0
        worst_var = 0.0
        worst_formula = 0.0
        occs = (
            oracle.occupations_by_energy(model, group_size)
            if model.l_param == 0.0
            else None
        )
        for a in range(2**args.sites):
            eps, dsq = oracle.product_statistics(pb, a)
            worst_eps = max(worst_eps, abs(eps))
            mean, var, _ = oracle.distribution_moments(
                oracle.w_a_distribution(sys_, pb, a)
            )
            e_a = float(pb.product_energies[a])
            worst_mean = max(worst_mean, abs(mean - (e_a + eps)))
            worst_var = max(worst_var, abs(var - dsq))
            if occs is not None:
                idx = [
                    (a >> (group_size * g)) % 2**group_size
                    for g in range(args.groups)
                ]
                states = [occs[i] for i in idx]
                formula = sum(
                    ising.delta_sq(states[g], states[g + 1], model)
                    for g in range(args.groups - 1)
                )
                worst_formula = max(worst_formula, abs(dsq - formula))
        rows = [
            ["sites", args.sites],
            ["groups", args.groups],
            ["max_abs_eps", worst_eps],
            ["max_mean_identity_dev", worst_mean],
            ["max_var_identity_dev", worst_var],
        ]
        if occs is not None:
            rows.append(["max_delta_sq_formula_dev", worst_formula])
        return ["quantity", "value"], rows

    if args.oracle_cmd == "gaussian":
        rows = []
        for n_groups in range(2, args.groups + 1):
            sites = group_size * n_groups
            sys_ = oracle.DenseThermalSystem.solve(
                oracle.build_hamiltonian(sites, model), args.beta_b / model.b_field
            )
            pb = oracle.product_basis(sites, group_size, model)
            worst = 0.0
            for a in range(2**sites):
                _, dsq = oracle.product_statistics(pb, a)
                if dsq < 1e-12:
                    continue
                dist = oracle.w_a_distribution(sys_, pb, a)
                worst = max(worst, abs(oracle.distribution_moments(dist)[2]))
            rows.append([n_groups, sites, worst])
        return ["n_groups", "sites", "max_abs_skewness"], rows

    if args.oracle_cmd == "rho":
        sys_ = oracle.DenseThermalSystem.solve(
            oracle.build_hamiltonian(args.sites, model), args.beta_b / model.b_field
        )
        pb = oracle.product_basis(args.sites, group_size, model)
        log_z, _ = oracle.thermal_state(sys_)
        dense = oracle.rho_product_diag(sys_, pb)
        e0 = float(np.min(sys_.eigenvalues))
        e1 = float(np.max(sys_.eigenvalues))
        worst = 0.0
        for a in range(2**args.sites):
            eps, dsq = oracle.product_statistics(pb, a)
            if dsq < 1e-12:
                continue
            stats = GroupStatistics(
                e_a=float(pb.product_energies[a]),
                eps_a=eps,
                delta_sq_a=dsq,
                delta_tilde_sq=0.0,
                e0=e0,
                e1=e1,
            )
            predicted = rho_diag(stats, sys_.beta, log_z)
            worst = max(worst, abs(predicted - math.log(float(dense[a]))))
        junctions = args.groups - 1
        return ["quantity", "value"], [
            ["sites", args.sites],
            ["groups", args.groups],
            ["max_abs_log_deviation", worst],
            ["per_junction", worst / junctions],
        ]

    raise ValueError(f"unknown oracle subcommand {args.oracle_cmd!r}")


def cmd_oracle(args) -> int:
    if args.oracle_cmd != "spectrum":
        if args.groups < 1 or args.sites % args.groups != 0:
            raise ValueError("--groups must divide --sites")
        if args.oracle_cmd in ("gaussian", "rho") and args.beta_b <= 0:
            raise ValueError("--beta-b must be positive")
    header, rows = _oracle_rows(args)
    with _out_stream(args.out) as fh:
        if args.format == "json":
            payload = [dict(zip(header, row)) for row in rows]
            fh.write(json.dumps(payload, indent=2) + "\n")
        elif args.format == "csv":
            _write_csv(fh, [f"localtemp oracle {args.oracle_cmd}"], header, rows)
        else:
            for row in rows:
                fh.write("  ".join(_fmt(v) for v in row) + "\n")
    return 0


# ---------------------------------------------------------------------------
# parser


def _add_acc_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--alpha", type=float, default=10.0)
    parser.add_argument("--delta", type=float, default=0.01)


def _add_ising_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--K", dest="k_param", type=float, default=None)
    parser.add_argument("--L", dest="l_param", type=float, default=None)
    parser.add_argument("--B", dest="b_field", type=float, default=1.0)
    parser.add_argument("--jx", type=float, default=None)
    parser.add_argument("--jy", type=float, default=None)


def _add_format_flags(parser: argparse.ArgumentParser, default: str) -> None:
    parser.add_argument("--format", choices=("human", "csv", "json"), default=default)
    parser.add_argument("--out", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="localtemp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    nmin = sub.add_parser("nmin", help="criteria at a single temperature")
    nmin_sub = nmin.add_subparsers(dest="chain", required=True)
    nh = nmin_sub.add_parser("harmonic")
    nh.add_argument("--t-over-theta", dest="t_over_theta", type=float, required=True)
    nh.add_argument("--name", default=None, help="material supplying a0 for l_min")
    nh.add_argument("--file", default=None)
    _add_acc_flags(nh)
    _add_format_flags(nh, "human")
    nh.set_defaults(func=cmd_nmin)
    ni = nmin_sub.add_parser("ising")
    ni.add_argument("--t-over-b", dest="t_over_b", type=float, required=True)
    _add_ising_flags(ni)
    _add_acc_flags(ni)
    _add_format_flags(ni, "human")
    ni.set_defaults(func=cmd_nmin)

    sweep = sub.add_parser("sweep", help="temperature sweep as CSV")
    sweep_sub = sweep.add_subparsers(dest="chain", required=True)
    for chain in ("harmonic", "ising"):
        sp = sweep_sub.add_parser(chain)
        sp.add_argument("--tmin", type=float, required=True)
        sp.add_argument("--tmax", type=float, required=True)
        sp.add_argument("--points", type=int, required=True)
        sp.add_argument("--log", action="store_true")
        if chain == "harmonic":
            sp.add_argument("--name", default=None)
            sp.add_argument("--file", default=None)
        else:
            _add_ising_flags(sp)
        _add_acc_flags(sp)
        _add_format_flags(sp, "csv")
        sp.set_defaults(func=cmd_sweep)

    figure = sub.add_parser("figure", help="fixed-parameter curve data")
    figure.add_argument("id", choices=("fig3", "fig4", "fig5", "fig6"))
    _add_format_flags(figure, "csv")
    figure.set_defaults(func=cmd_figure)

    materials = sub.add_parser("materials", help="material database and lengths")
    materials.add_argument("--file", default=None)
    materials.add_argument("--name", default=None)
    materials.add_argument("--temp-kelvin", dest="temp_kelvin", type=float, default=None)
    _add_acc_flags(materials)
    _add_format_flags(materials, "human")
    materials.set_defaults(func=cmd_materials)

    orc = sub.add_parser("oracle", help="dense verification drivers")
    orc_sub = orc.add_subparsers(dest="oracle_cmd", required=True)
    for name in ("spectrum", "moments", "gaussian", "rho"):
        op = orc_sub.add_parser(name)
        op.add_argument("--sites", type=int, required=True)
        if name == "spectrum":
            op.add_argument("--boundary", choices=("open", "periodic"), default="open")
        else:
            op.add_argument("--groups", type=int, required=True)
        if name in ("gaussian", "rho"):
            op.add_argument("--beta-b", dest="beta_b", type=float, default=1.0)
        _add_ising_flags(op)
        _add_format_flags(op, "human")
        op.set_defaults(func=cmd_oracle)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"localtemp: error: {exc}", file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except UnsupportedCouplingError as exc:
        print(f"localtemp: unsupported coupling: {exc}", file=sys.stderr)
        return 3
    except (QuadratureError, EmptyIntervalError, InconsistentWindowError) as exc:
        print(f"localtemp: numerical failure: {exc}", file=sys.stderr)
        return 2
    except OverflowError as exc:
        print(f"localtemp: numerical failure: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"localtemp: error: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
