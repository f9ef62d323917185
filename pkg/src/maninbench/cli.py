"""Command-line front end.

Usage::

    maninbench <verb> [--config run.yaml] [flags]

Verbs: invariants, histogram, count, fit, local, saturation, subgroups,
report. Flags override values read from the YAML config. CSV goes to
stdout or ``--output``; the JSON verbs emit one schema-validated document.

Exit codes: 0 success, 1 an embedded check failed, 2 bad input or a
resource guard tripped.
"""

from __future__ import annotations

import argparse
import dataclasses
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Tuple

import numpy as np
import yaml

from . import report as rpt
from ._arith import iroot
from .asymptotics import (
    check_shell_envelope,
    count_producer,
    dirichlet_pole_probe,
    exponent_probe,
    fit_constant,
    fit_log_power,
    saturation_profile,
    small_diagonal_fractions,
    well_roundedness,
)
from .cache import cache_path, fingerprint
from .enumeration import (
    DEFAULT_BOUND_LIMIT,
    HistogramTooShort,
    ResourceLimitError,
    count_curve,
    geometric_grid,
    height_histogram,
    schanuel_count,
    singular_classes,
)
from .groups import FiniteGroup, builtin, from_permutations, load_table
from .local_density import local_density, local_factor_check, quadric_share
from .model import KAPPA, ModelConfig, boundary_geometry, restriction_table
from .picard import is_balanced, manin_invariants
from .subgroups import (
    admissible_subgroups,
    goursat_closure,
    intermediate_subgroups,
    random_tuple,
    tuple_validity,
)

EXIT_OK, EXIT_CHECK_FAILED, EXIT_BAD_INPUT = 0, 1, 2

VERBS = ("invariants", "histogram", "count", "fit", "local", "saturation", "subgroups", "report")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    r: int = 2
    degrees: Optional[Tuple[int, ...]] = None  # None: anticanonical
    bound: Optional[int] = None  # None: smallest bound covering the grid
    t_min: int = 16
    t_max: int = 2**16
    ratio: float = 2.0
    diagonals: bool = False
    kappas: Tuple[float, ...] = (1.25, 1.10, 1.02)
    s_grid: Tuple[float, ...] = (4.2, 4.4, 4.6, 4.8)
    clamps: Tuple[int, ...] = (1, 2, 4)
    primes: Tuple[int, ...] = (2, 3, 5, 7)
    depth: int = 4
    s: float = KAPPA + 0.5
    group: str = "A5"
    generators: Optional[Tuple[str, ...]] = None
    permutation_degree: Optional[int] = None
    group_table: Optional[str] = None
    n: int = 2
    samples: int = 0
    seed: Optional[int] = None
    cache_dir: Optional[str] = None
    output: Optional[str] = None

    def __post_init__(self):
        for name in ("degrees", "kappas", "s_grid", "clamps", "primes", "generators"):
            v = getattr(self, name)
            if v is not None and not isinstance(v, tuple):
                setattr(self, name, tuple(v) if isinstance(v, (list, tuple)) else (v,))
        if self.depth < 2:
            raise ConfigError("depth must be >= 2")
        if any(k <= 1 for k in self.kappas):
            raise ConfigError("every kappa must exceed 1")
        if self.bound is not None and not 1 <= self.bound <= DEFAULT_BOUND_LIMIT:
            raise ConfigError(f"bound must lie in 1..{DEFAULT_BOUND_LIMIT}")
        if self.samples < 0:
            raise ConfigError("samples must be >= 0")
        if self.samples and self.seed is None:
            raise ConfigError("a seed is mandatory when samples > 0")

    @property
    def model(self) -> ModelConfig:
        if self.degrees is None:
            return ModelConfig.anticanonical(self.r)
        return ModelConfig(self.r, self.degrees)

    def content(self) -> dict:
        """Fields that determine results (paths excluded), for fingerprinting."""
        d = dataclasses.asdict(self)
        d.pop("cache_dir")
        d.pop("output")
        return {k: list(v) if isinstance(v, tuple) else v for k, v in d.items()}


def load_config(path) -> dict:
    data = yaml.safe_load(Path(path).read_text()) or {}
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be a mapping")
    known = {f.name for f in dataclasses.fields(RunConfig)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"{path}: unknown keys {unknown}")
    return data


# --- shared plumbing ------------------------------------------------------------


def _grid(cfg: RunConfig) -> List[int]:
    return geometric_grid(cfg.t_min, cfg.t_max, cfg.ratio)


def _required_bound(model: ModelConfig, t_max: float) -> int:
    return max(1, iroot(int(math.floor(t_max)), min(model.degrees)))


def _histogram(cfg: RunConfig, t_max: float):
    required = _required_bound(cfg.model, t_max)
    bound = required if cfg.bound is None else cfg.bound
    if bound < required:
        raise HistogramTooShort(required, bound)
    return height_histogram(bound, cache_dir=cfg.cache_dir)


def _cache_fp(cfg: RunConfig):
    return fingerprint(cache_path(cfg.cache_dir)) if cfg.cache_dir else None


def _load_group(cfg: RunConfig) -> FiniteGroup:
    if cfg.group_table:
        return load_table(cfg.group_table)
    if cfg.generators:
        return from_permutations(list(cfg.generators), degree=cfg.permutation_degree, name="custom")
    return builtin(cfg.group)


def _envelope_check(hist) -> dict:
    try:
        check_shell_envelope(hist)
        return {"name": "shell_envelope", "passed": True}
    except AssertionError as exc:
        return {"name": "shell_envelope", "passed": False, "detail": str(exc)}


def _csv(header, rows) -> str:
    lines = [",".join(header)] + [",".join(str(x) for x in row) for row in rows]
    return "\n".join(lines) + "\n"


def _float(x) -> float:
    return float(f"{float(x):.12g}")


# --- report sections --------------------------------------------------------------


def invariants_section(model: ModelConfig) -> dict:
    geom, L = boundary_geometry(model)
    top = manin_invariants(geom, L)
    table = restriction_table(model)
    balanced, witness = is_balanced(geom, L, table)
    rows = []
    for (i, j), inv in sorted(table.invariants().items()):
        rows.append({"pair": [i, j], "a": rpt.fraction_str(inv.a), "b": inv.b, "below": inv < top})
    return {
        "a": rpt.fraction_str(top.a),
        "b": top.b,
        "balanced": balanced,
        "witness": list(witness) if witness else None,
        "restrictions": rows,
    }


def curve_section(hist, curve, model: ModelConfig) -> dict:
    out = {
        "bound": hist.bound,
        "points": len(curve),
        "t_min": curve.thresholds[0],
        "t_max": curve.thresholds[-1],
        "n_min": curve.values[0],
        "n_max": curve.values[-1],
    }
    if model.r >= 3:
        fr = small_diagonal_fractions(hist, model, curve.thresholds)
        out["diagonal_fractions"] = [
            {"pair": list(p), "first": _float(v[0]), "last": _float(v[-1])} for p, v in sorted(fr.items())
        ]
    return out


def fit_section(curve, model: ModelConfig) -> dict:
    geom, L = boundary_geometry(model)
    inv = manin_invariants(geom, L)
    free = exponent_probe(curve)
    fixed_a = fit_log_power(curve, inv.a)
    c_hat, resid = fit_constant(curve, inv.a, inv.b)
    out = {
        "a_hat": _float(free.a_hat),
        "b_hat": _float(free.b_hat),
        "c_hat": _float(free.c_hat),
        "residual": _float(free.residual_norm),
        "b_hat_exact_a": _float(fixed_a.b_hat),
        "c_hat_exact_ab": _float(c_hat),
        "max_relative_residual_exact_ab": _float(np.max(np.abs(resid))),
    }
    if model.r == 2:
        B = curve.thresholds[-1]
        out["schanuel_constant_ratio"] = _float(schanuel_count(iroot(B, model.degrees[0])) / iroot(B, model.degrees[0]) ** 4)
    return out


def well_roundedness_section(hist, model: ModelConfig, thresholds, kappas) -> list:
    rows = []
    for k in kappas:
        w = well_roundedness(count_producer(hist, model), thresholds, k)
        rows += [{"kappa": k, "T": int(t), "ratio": _float(x)} for t, x in zip(w.thresholds, w.ratios)]
    return rows


def pole_section(hist, s_grid) -> dict:
    pp = dirichlet_pole_probe(hist, s_grid)
    return {
        "s": list(pp.s),
        "values": [_float(v) for v in pp.values],
        "tail_bounds": [_float(v) for v in pp.tail_bounds],
        "spread": _float(pp.spread),
    }


def saturation_section(hist, model, thresholds, clamps) -> dict:
    sp = saturation_profile(hist, model, thresholds, clamps)
    return {
        "witness": list(sp.witness),
        "T": list(sp.thresholds),
        "fractions": {str(k): [_float(x) for x in v] for k, v in sp.fractions.items()},
    }


def local_section(cfg: RunConfig):
    rows, checks = [], []
    for p in cfg.primes:
        prof = local_density(p, cfg.depth)
        lf = local_factor_check(prof, cfg.s)
        mu0_ok = prof.mu[0] == 1 - quadric_share(p)
        ratio_ok = all(prof.mu[k + 1] == prof.mu[k] / p for k in range(1, cfg.depth - 1))
        bound_ok = lf.deviation <= 3 / p**2
        rows.append(
            {
                "p": p,
                "depth": cfg.depth,
                "mu": [rpt.fraction_str(m) for m in prof.mu],
                "tail": rpt.fraction_str(prof.tail),
                "s": cfg.s,
                "factor": _float(lf.factor),
                "regularized": _float(lf.regularized),
                "deviation": _float(lf.deviation),
            }
        )
        checks += [
            {"name": f"mu0_exact_p{p}", "passed": mu0_ok},
            {"name": f"mu_ratio_exact_p{p}", "passed": ratio_ok},
            {"name": f"local_factor_within_3_over_p2_p{p}", "passed": bool(bound_ok)},
        ]
    return rows, checks


def subgroups_section(cfg: RunConfig):
    G = _load_group(cfg)
    found = intermediate_subgroups(G, cfg.n)
    out = {
        "group": G.name,
        "order": G.order,
        "n": cfg.n,
        "bell": len(admissible_subgroups(cfg.n)),
        "found": [
            {"order": s.order, "partition": [list(b) for b in s.partition.blocks], "admissible": s.admissible}
            for s in found
        ],
        "non_admissible": sum(not s.admissible for s in found),
    }
    checks = [{"name": "closures_are_subgroups", "passed": all(s.subgroup.is_closed() for s in found)}]
    if cfg.samples:
        rng = np.random.default_rng(cfg.seed)
        full = 0
        valid = 0
        for _ in range(cfg.samples):
            t = random_tuple(G, cfg.n, rng)
            if tuple_validity(G, t):
                valid += 1
                full += goursat_closure(G, t).order == G.order**cfg.n
        out["random_closures"] = {"samples": cfg.samples, "seed": cfg.seed, "valid": valid, "full": full}
    return out, checks


# --- verbs ------------------------------------------------------------------------


def cmd_invariants(cfg: RunConfig):
    return {"model": {"r": cfg.model.r, "degrees": list(cfg.model.degrees)}, "invariants": invariants_section(cfg.model), "checks": []}


def cmd_histogram(cfg: RunConfig) -> str:
    bound = cfg.bound if cfg.bound is not None else _required_bound(cfg.model, cfg.t_max)
    hist = height_histogram(bound, cache_dir=cfg.cache_dir)
    return _csv(["n", "h"], [(n, hist[n]) for n in range(1, hist.bound + 1)])


def cmd_count(cfg: RunConfig) -> str:
    grid = _grid(cfg)
    hist = _histogram(cfg, grid[-1])
    return count_curve(hist, cfg.model, grid, diagonals=cfg.diagonals).to_csv()


def cmd_fit(cfg: RunConfig):
    grid = _grid(cfg)
    hist = _histogram(cfg, max(cfg.kappas) * grid[-1])
    curve = count_curve(hist, cfg.model, grid)
    return {
        "model": {"r": cfg.model.r, "degrees": list(cfg.model.degrees)},
        "curve": curve_section(hist, curve, cfg.model),
        "fit": fit_section(curve, cfg.model),
        "well_roundedness": well_roundedness_section(hist, cfg.model, grid, cfg.kappas),
        "checks": [_envelope_check(hist)],
    }


def cmd_local(cfg: RunConfig):
    rows, checks = local_section(cfg)
    return {"local_densities": rows, "checks": checks}


def cmd_saturation(cfg: RunConfig) -> str:
    grid = _grid(cfg)
    hist = _histogram(cfg, grid[-1])
    sp = saturation_profile(hist, cfg.model, grid, cfg.clamps)
    header = ["T"] + [f"frac_K{k}" for k in cfg.clamps]
    rows = [[t] + [f"{sp.fractions[k][i]:.12g}" for k in cfg.clamps] for i, t in enumerate(grid)]
    return _csv(header, rows)


def cmd_subgroups(cfg: RunConfig):
    section, checks = subgroups_section(cfg)
    return {"subgroups": section, "checks": checks}


def cmd_report(cfg: RunConfig):
    out = cmd_fit(cfg)
    out["invariants"] = invariants_section(cfg.model)
    hist = _histogram(cfg, max(cfg.kappas) * _grid(cfg)[-1])
    out["pole_probe"] = pole_section(hist, cfg.s_grid)
    B = hist.bound
    out["checks"].append(
        {"name": "histogram_plus_singular_is_schanuel", "passed": hist.total(B) + singular_classes(B) == schanuel_count(B)}
    )
    if not out["invariants"]["balanced"] and out["invariants"]["witness"][0] == 1:
        out["saturation_profile"] = saturation_section(hist, cfg.model, _grid(cfg), cfg.clamps)
    rows, checks = local_section(cfg)
    out["local_densities"] = rows
    out["checks"] += checks
    section, checks = subgroups_section(cfg)
    out["subgroups"] = section
    out["checks"] += checks
    return out


COMMANDS = {
    "invariants": cmd_invariants,
    "histogram": cmd_histogram,
    "count": cmd_count,
    "fit": cmd_fit,
    "local": cmd_local,
    "saturation": cmd_saturation,
    "subgroups": cmd_subgroups,
    "report": cmd_report,
}


# --- argument parsing -------------------------------------------------------------


def _int_list(text: str) -> List[int]:
    return [int(x) for x in text.replace(",", " ").split()]


def _float_list(text: str) -> List[float]:
    return [float(x) for x in text.replace(",", " ").split()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="maninbench", description="Point counts on products of PGL2 and finite-group checks.")
    parser.add_argument("verb", choices=VERBS)
    parser.add_argument("--config", help="YAML file with RunConfig fields; flags override it")
    parser.add_argument("--r", type=int)
    parser.add_argument("--degrees", type=_int_list, help="even degrees m_2..m_r, e.g. '4,8'")
    parser.add_argument("--bound", type=int, help="histogram bound B")
    parser.add_argument("--t-min", dest="t_min", type=int)
    parser.add_argument("--t-max", dest="t_max", type=int)
    parser.add_argument("--ratio", type=float)
    parser.add_argument("--diagonals", action="store_true", default=None, help="add N_diag(i,j) columns")
    parser.add_argument("--kappas", type=_float_list)
    parser.add_argument("--s-grid", dest="s_grid", type=_float_list)
    parser.add_argument("--clamps", type=_int_list)
    parser.add_argument("--primes", type=_int_list)
    parser.add_argument("--depth", type=int)
    parser.add_argument("--s", type=float)
    parser.add_argument("--group", help="built-in group: A5, PSL27, SL25")
    parser.add_argument("--generators", nargs="+", help="permutation generators in cycle notation")
    parser.add_argument("--permutation-degree", dest="permutation_degree", type=int)
    parser.add_argument("--group-table", dest="group_table", help="multiplication table file")
    parser.add_argument("--n", type=int)
    parser.add_argument("--samples", type=int, help="random closures to draw (needs --seed)")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--cache-dir", dest="cache_dir")
    parser.add_argument("--output", "-o")
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    values = load_config(args.config) if args.config else {}
    for f in dataclasses.fields(RunConfig):
        flag = getattr(args, f.name, None)
        if flag is not None:
            values[f.name] = flag
    return RunConfig(**values)


def run(argv=None) -> Tuple[int, str, Optional[str]]:
    """Run one verb; returns the exit code, the rendered text and the output path."""
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        result = COMMANDS[args.verb](cfg)
    except (ConfigError, HistogramTooShort, ResourceLimitError, ValueError, TypeError, OSError) as exc:
        return EXIT_BAD_INPUT, f"error: {exc}\n", None
    if isinstance(result, str):
        return EXIT_OK, result, cfg.output
    result = {
        "spec_version": rpt.SPEC_VERSION,
        "command": args.verb,
        "config": cfg.content(),
        "fingerprints": {"config": rpt.config_fingerprint(cfg.content()), "histogram_cache": _cache_fp(cfg)},
        **result,
    }
    text = rpt.dumps(result)
    return (EXIT_OK if rpt.all_passed(result) else EXIT_CHECK_FAILED), text, cfg.output


def main(argv=None) -> int:
    code, text, output = run(argv)
    if code == EXIT_BAD_INPUT:
        sys.stderr.write(text)
    elif output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
