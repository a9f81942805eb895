"""Batch front-end: sweep Gibbs families, check invariants, inspect charts.

Model files are YAML mappings::

    kappa: 0.5
    states: [1, 2, 3, 4, 5]
    energy: [0, 0, 1, 2, 2]
    lattice_step: 1      # optional

Densities and tangent vectors are plain text, one value per line, with a
header line ``# states: 1 2 3 4 5`` giving the order of the values.

Exit codes: 0 success, 2 malformed or inconsistent input, 3 solver failure.
"""

from __future__ import annotations

import argparse
import io
import math
import sys
from dataclasses import dataclass

import numpy as np
import yaml

from ._normalize import ConvergenceError
from .core import as_kappa
from .densities import FiniteDensity, StateSpace, divergence, escort, total_variation, uniform
from .gibbs import EnergyModel, gibbs_density, psi_prime
from .invariants import (
    kbinomial_residual,
    kbinomial_residual_boundary,
    orthogonal_lattice_basis,
)
from .manifold import (
    autoparallel_closed_form,
    integrate_autoparallel,
    reverse_divergence,
    to_coordinates,
)

MEMBER_TOL = 1e-6


class InputError(ValueError):
    """Malformed or mutually inconsistent input files."""


def fmt(x) -> str:
    return format(float(x) + 0.0, ".17g")


@dataclass(frozen=True)
class ModelSpec:
    kappa: float
    model: EnergyModel

    @property
    def space(self) -> StateSpace:
        return self.model.space


def load_spec(path, kappa=None) -> ModelSpec:
    try:
        with open(path) as fh:
            raw = yaml.safe_load(fh)
    except (OSError, yaml.YAMLError) as exc:
        raise InputError(f"cannot read model file {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise InputError("model file must be a mapping")
    missing = {"kappa", "states", "energy"} - raw.keys()
    if missing and not (missing == {"kappa"} and kappa is not None):
        raise InputError(f"model file lacks {sorted(missing)}")
    try:
        k = as_kappa(raw["kappa"] if kappa is None else kappa)
        space = StateSpace(tuple(raw["states"]))
        model = EnergyModel(space, raw["energy"], lattice_step=raw.get("lattice_step"))
    except (TypeError, ValueError) as exc:
        raise InputError(str(exc)) from exc
    return ModelSpec(k, model)


def read_vector(path, space: StateSpace) -> np.ndarray:
    """Read a one-value-per-line file and reorder it to ``space``."""
    header = None
    values = []
    try:
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                if line.startswith("#"):
                    key, _, rest = line[1:].partition(":")
                    if key.strip() == "states":
                        header = rest.split()
                    continue
                values.append(float(line))
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from exc
    if header is None:
        raise InputError(f"{path}: missing '# states:' header")
    if len(header) != len(values):
        raise InputError(f"{path}: header names {len(header)} states but {len(values)} values follow")
    names = [str(s) for s in space.labels]
    if sorted(header) != sorted(names) or len(set(header)) != len(header):
        raise InputError(f"{path}: states {header} do not match the model states {names}")
    by_name = dict(zip(header, values))
    return np.array([by_name[n] for n in names])


def read_density(path, space: StateSpace) -> FiniteDensity:
    try:
        return FiniteDensity(space, read_vector(path, space))
    except InputError:
        raise
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from exc


def write_vector(fh, space: StateSpace, values):
    """Inverse of :func:`read_vector`."""
    fh.write("# states: " + " ".join(str(s) for s in space.labels) + "\n")
    for v in values:
        fh.write(fmt(v) + "\n")


def theta_grid(args) -> np.ndarray:
    if args.theta_steps < 1:
        raise InputError("--theta-steps must be positive")
    if args.theta_steps == 1:
        return np.array([args.theta_min])
    return np.linspace(args.theta_min, args.theta_max, args.theta_steps)


def _csv(fh, header, rows):
    fh.write(",".join(header) + "\n")
    for row in rows:
        fh.write(",".join(r if isinstance(r, str) else fmt(r) for r in row) + "\n")


def _report(fh, items):
    for key, val in items:
        if isinstance(val, str):
            text = val
        elif np.ndim(val):
            text = " ".join(fmt(x) for x in val)
        else:
            text = fmt(val)
        fh.write(f"{key} = {text}\n")


def cmd_gibbs(spec: ModelSpec, args, out):
    k, model = spec.kappa, spec.model
    basis = orthogonal_lattice_basis(model) if model.lattice_step is not None else None
    rows = []
    for theta in theta_grid(args):
        pt = gibbs_density(k, model, theta)
        if basis is None:
            res = math.nan
        else:
            res = max(abs(kbinomial_residual(k, pt.density, v)) for v in basis)
        rows.append([theta, pt.psi, psi_prime(k, model, theta, pt), *pt.weights, res])
    header = ["theta", "psi", "psi_prime"] + [f"p[{s}]" for s in model.space.labels]
    _csv(out, header + ["max_basis_residual"], rows)


def cmd_invariants(spec: ModelSpec, args, out):
    k, model = spec.kappa, spec.model
    if model.lattice_step is None:
        raise InputError("invariants need a lattice_step in the model file")
    p = read_density(args.density, model.space)
    tol = MEMBER_TOL if args.tol is None else args.tol
    basis = orthogonal_lattice_basis(model)
    strict = p.is_strict
    items = [("kappa", k), ("positivity", p.positivity)]
    worst = 0.0
    for i, v in enumerate(basis):
        r = kbinomial_residual(k, p, v) if strict else kbinomial_residual_boundary(k, p, v)
        worst = max(worst, abs(r))
        items.append((f"v{i + 1}", " ".join(str(int(x)) for x in v.values)))
        items.append((f"residual{i + 1}", r))
    if worst > tol:
        verdict = "non-member"
    else:
        verdict = "member" if strict else "boundary-consistent"
    items += [("max_residual", worst), ("threshold", tol), ("verdict", verdict)]
    _report(out, items)


def cmd_chart(spec: ModelSpec, args, out):
    k = spec.kappa
    p = read_density(args.p, spec.space)
    q = read_density(args.q, spec.space)
    if not (p.is_strict and q.is_strict):
        raise InputError("chart needs strictly positive densities")
    cp = to_coordinates(k, p, q)
    _report(
        out,
        [
            ("kappa", k),
            ("states", " ".join(str(s) for s in spec.space.labels)),
            ("u", cp.u.values),
            ("psi", cp.psi),
            ("divergence_pq", divergence(k, p, q)),
            ("divergence_qp", reverse_divergence(k, cp)),
            ("escort", escort(k, p, q).weights),
        ],
    )


def cmd_divergence(spec: ModelSpec, args, out):
    k = spec.kappa
    p = read_density(args.p, spec.space)
    q = read_density(args.q, spec.space)
    if not (p.is_strict and q.is_strict):
        raise InputError("divergence needs strictly positive densities")
    _report(out, [("kappa", k), ("divergence", divergence(k, p, q))])


def cmd_ode(spec: ModelSpec, args, out):
    k = spec.kappa
    p0 = uniform(spec.space) if args.p0 is None else read_density(args.p0, spec.space)
    if not p0.is_strict:
        raise InputError("the initial density must be strictly positive")
    u = read_vector(args.u, spec.space)
    scale = max(1.0, float(np.max(np.abs(u))))
    if abs(np.dot(p0.weights, u)) > 1e-12 * scale:
        raise InputError("u is not centered at the initial density")
    grid = theta_grid(args)
    if not (grid[0] <= 0 <= grid[-1]):
        raise InputError("the theta grid must contain 0")
    try:
        sol = integrate_autoparallel(k, p0, u, grid, step=args.step)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    rows = []
    for theta, s in zip(grid, sol):
        rows.append([theta, total_variation(s, autoparallel_closed_form(k, p0, u, theta)), *s.weights])
    _csv(out, ["theta", "tv"] + [f"p[{x}]" for x in spec.space.labels], rows)
    sys.stderr.write(f"max_tv = {fmt(max(r[1] for r in rows))}\n")


COMMANDS = {
    "gibbs": cmd_gibbs,
    "invariants": cmd_invariants,
    "chart": cmd_chart,
    "ode": cmd_ode,
    "divergence": cmd_divergence,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("model", help="YAML model file")
    common.add_argument("--kappa", type=float, help="override the model's kappa")
    common.add_argument("--tol", type=float, help="membership threshold (invariants)")
    common.add_argument("--out", help="write output here instead of stdout")

    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument("--theta-min", type=float, default=-1.0)
    grid.add_argument("--theta-max", type=float, default=1.0)
    grid.add_argument("--theta-steps", type=int, default=21)

    ap = argparse.ArgumentParser(prog="kappageom", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("gibbs", parents=[common, grid], help="tabulate a kappa-Gibbs family")
    p = sub.add_parser("invariants", parents=[common], help="kappa-binomial membership check")
    p.add_argument("density")
    for name in ("chart", "divergence"):
        p = sub.add_parser(name, parents=[common], help=f"{name} of two densities")
        p.add_argument("p")
        p.add_argument("q")
    p = sub.add_parser("ode", parents=[common, grid], help="integrate an auto-parallel curve")
    p.add_argument("u", help="tangent vector file")
    p.add_argument("--p0", help="initial density file (default: uniform)")
    p.add_argument("--step", type=float, default=1e-3)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    buf = io.StringIO()
    try:
        spec = load_spec(args.model, args.kappa)
        COMMANDS[args.command](spec, args, buf)
    except (ConvergenceError, FloatingPointError) as exc:
        sys.stderr.write(f"error: solver failure: {exc}\n")
        return 3
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
