"""Command line: ``presym {mc,gauge,moser,cohomology,cylinder,selftest}``.

Every run writes ``report.json`` (or ``report.csv``) with one record per check
and a separate ``timing.json``, so reports are byte-identical across runs with
the same configuration and seed.  Exit codes: 0 all checks pass, 2 some check
fails, 3 bad input, 4 numerical breakdown.
"""

import argparse
import csv
import io
import json
import logging
import os
import sys
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import acceptance as ac
from . import cohomology as co
from . import cylinder as cy
from .acceptance import Check, _jsonable
from .errors import InputError, NumericalError, SingularityError, SolvabilityError
from .families import (
    constant_two_form,
    model_T2,
    model_T3,
    model_T4,
    moser_family,
    random_mc_beta,
    random_horizontal_beta,
    raw_gauge_family,
    sample_gauge_path,
)
from .fieldio import atomic_write, read_config, read_field, read_gauge_path
from .foliation import (
    FoliationGaugePath,
    GraphMapField,
    gauge_equation_residual,
    integrate_gauge_foliation,
    mc_residual_foliation,
    product_involutivity_check,
)
from .pointwise import KAPPA_MAX, TAU_ALG, TAU_RANK, Splitting, _cond, _witness
from .presymplectic import (
    PresymplecticModel,
    _kernel_frames,
    gauge_to_foliation_gauge,
    gauge_transform,
    hat_beta,
    mc_residual_presym,
    moser_solve,
    moser_vector_from_gauge,
    strict_morphism,
)
from .torus import FormField, TorusGrid, VectorField, d

log = logging.getLogger("presym")

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3, 4
BUILTIN_MODELS = {"T2": model_T2, "T3": model_T3, "T4": model_T4}
DEFAULT_MODEL = "T3"


@dataclass
class RunConfig:
    command: str
    kind: str = None
    model: str = None
    input: str = None
    example: str = None
    grid_n: int = 16
    cutoff: int = None
    tol_mc: float = 1e-6
    tol_gauge: float = 1e-5
    tau_alg: float = TAU_ALG
    tau_rank: float = TAU_RANK
    kappa_max: float = KAPPA_MAX
    seed: int = 0
    out: str = None
    format: str = "json"
    settings: dict = field(default_factory=dict)

    def validate(self):
        for name in ("tol_mc", "tol_gauge", "tau_alg", "tau_rank", "kappa_max"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and v > 0):
                raise InputError(f"{name} must be positive, got {v!r}")
        n = self.grid_n
        if not isinstance(n, int) or n < 8 or n & (n - 1):
            raise InputError(f"grid N must be a power of two >= 8, got {n!r}")
        if self.cutoff is not None and (not isinstance(self.cutoff, int) or self.cutoff < 0):
            raise InputError("cutoff must be a non-negative integer")
        if self.format not in ("json", "csv"):
            raise InputError("format must be json or csv")

    def get(self, key, default=None):
        return self.settings.get(key, default)

    def echo(self):
        out = {k: v for k, v in asdict(self).items() if k not in ("settings", "out")}
        out["settings"] = dict(sorted(self.settings.items()))
        return out


@dataclass
class RunReport:
    config: RunConfig
    checks: list = field(default_factory=list)
    data: dict = field(default_factory=dict)
    wall_time: float = 0.0
    numerical_failure: bool = False

    def add(self, *checks):
        self.checks.extend(checks)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def as_dict(self):
        return {
            "command": self.config.echo(),
            "passed": self.passed,
            "checks": [c.as_dict() for c in self.checks],
            "data": _jsonable_tree(self.data),
        }


def _jsonable_tree(x):
    if isinstance(x, dict):
        return {str(k): _jsonable_tree(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable_tree(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable_tree(x.tolist())
    return _jsonable(x)


# -- models and inputs ------------------------------------------------------------------------


def load_model(cfg, grid=None):
    """PresymplecticModel from the config (built-in name or explicit eta and frames)."""
    grid_n = grid.N if grid is not None else cfg.grid_n
    name = cfg.get("model")
    if name is None and "eta" not in cfg.settings:
        name = DEFAULT_MODEL if grid is None or grid.n == 3 else None
    if name is not None:
        if name not in BUILTIN_MODELS:
            raise InputError(f"unknown built-in model {name!r}; choose from {sorted(BUILTIN_MODELS)}")
        model = BUILTIN_MODELS[name](grid_n)
        if grid is not None and model.grid != grid:
            raise InputError("input field grid does not match the model")
        return model
    if "eta" not in cfg.settings:
        raise InputError("config needs either 'model' or 'n' and 'eta'")
    n = int(cfg.get("n", grid.n if grid is not None else 0))
    if n < 2:
        raise InputError("config needs the torus dimension 'n'")
    grid = grid or TorusGrid(n, grid_n)
    eta = constant_two_form(n, cfg.get("eta"))
    split = _config_splitting(cfg, n)
    return PresymplecticModel(grid, eta, split, cfg.tau_rank, cfg.kappa_max)


def _config_splitting(cfg, n):
    if "K_frame" not in cfg.settings and "G_frame" not in cfg.settings:
        return None
    K = np.array(cfg.get("K_frame", []), dtype=float).reshape(-1, n).T
    G = np.array(cfg.get("G_frame", []), dtype=float).reshape(-1, n).T
    return Splitting(K.reshape(n, -1), G.reshape(n, -1), cfg.kappa_max)


def load_splitting(cfg, grid):
    """Splitting for foliation commands: explicit frames, else the model's."""
    if "K_frame" in cfg.settings or "G_frame" in cfg.settings:
        split = _config_splitting(cfg, grid.n)
        if split.n != grid.n:
            raise InputError("frames do not match the torus dimension")
        return split
    return load_model(cfg, grid).split


def _grid_for(cfg):
    if "model" in cfg.settings or "eta" in cfg.settings or "n" not in cfg.settings:
        return load_model(cfg).grid
    return TorusGrid(int(cfg.get("n")), cfg.grid_n)


# -- mc ------------------------------------------------------------------------------------


def cmd_mc(cfg):
    report = RunReport(cfg)
    rng = np.random.default_rng(cfg.seed)
    kind = cfg.kind or "presym"
    if kind == "foliation":
        if cfg.input:
            grid, degree, values = read_field(cfg.input)
            split = load_splitting(cfg, grid)
            phi = GraphMapField(grid, split, values)
        else:
            model = load_model(cfg)
            phi = _example_beta(cfg, model, rng, as_graph=True)
        cond = phi.transversality_cond()
        report.add(Check("mc.transversality_cond", float(np.max(cond)), cfg.kappa_max))
        R, sup = mc_residual_foliation(phi)
        w = _witness(R.pointwise_norm(), phi.grid.shape)
        report.add(Check("mc.foliation_residual", sup, cfg.tol_mc, witness=list(w)))
    elif kind == "presym":
        if cfg.input:
            grid, degree, values = read_field(cfg.input)
            model = load_model(cfg, grid)
            beta = FormField(grid, 2, values)
        else:
            model = load_model(cfg)
            beta = _example_beta(cfg, model, rng)
        closed, dev, wdev = mc_residual_presym(model, beta, return_witness=True)
        fb = hat_beta(model, beta)
        pt = np.zeros(model.grid.shape)
        if model.grid.n > 2:
            pt = np.max(np.abs(d(fb).values.reshape(model.grid.shape + (-1,))), axis=-1)
        report.add(Check("mc.closedness", closed, cfg.tol_mc, witness=list(_witness(pt, model.grid.shape))))
        report.add(Check("mc.rank_deviation", dev, 0, "==", witness=list(wdev)))
    else:
        raise InputError(f"unknown mc kind {kind!r}")
    return report


def _example_beta(cfg, model, rng, as_graph=False):
    """``zero``, a forward-built MC form ``mc``, or ``perturbed`` (a non-closed horizontal bump added)."""
    ex = cfg.example or "zero"
    if ex not in ("zero", "mc", "perturbed"):
        raise InputError(f"unknown mc example {ex!r}; use zero, mc or perturbed")
    beta = FormField.zeros(model.grid, 2)
    if ex != "zero":
        beta = random_mc_beta(model, rng, float(cfg.get("amplitude", 0.1)), int(cfg.get("kmax", 1)))
    eps = float(cfg.get("perturbation", 0.01))
    if not as_graph:
        if ex == "perturbed":
            beta = beta + random_horizontal_beta(model, rng, eps, 2)
        return beta
    phi = strict_morphism(model, beta)
    if ex == "perturbed":
        # a sheared bump; it is non-involutive as soon as dim K >= 2
        x = model.grid.coords
        wave = eps * np.sin(x[..., 0] + 2 * x[..., -1])
        bump = rng.standard_normal(phi.values.shape[-2:])
        phi = GraphMapField(model.grid, model.split, phi.values + wave[..., None, None] * bump)
    return phi


# -- gauge ------------------------------------------------------------------------------------


def _foliation_example_path(cfg, split, grid):
    ex = cfg.example or "forward"
    steps = int(cfg.get("steps", 40))
    phi0 = GraphMapField.zeros(grid, split)
    if ex == "constant":
        Y = VectorField.zeros(grid)
        return integrate_gauge_foliation(phi0, Y, steps=steps)
    x = grid.coords
    amp = float(cfg.get("amplitude", 0.2))
    wave = amp * np.sin(x[..., 0] + x[..., 1 % grid.n])
    Y = VectorField(grid, wave[..., None] * split.G[:, -1])
    scale = 1.1 if ex == "control" else 1.0
    if ex not in ("forward", "control"):
        raise InputError(f"unknown gauge example {ex!r}; use constant, forward or control")
    return integrate_gauge_foliation(phi0, Y, steps=steps, rhs_scale=scale)


def _presym_example_path(cfg, model):
    ex = cfg.example or "forward"
    nodes = int(cfg.get("nodes", 33))
    if ex == "constant":
        zero = FormField.zeros(model.grid, 2)
        zero1 = FormField.zeros(model.grid, 1)
        return sample_gauge_path(model, lambda t: zero, lambda t: zero1, nodes)
    if ex not in ("forward", "control"):
        raise InputError(f"unknown gauge example {ex!r}; use constant, forward or control")
    if model.grid.n != 3 or model.split.k != 1:
        raise InputError("built-in presym gauge examples need the T3 model")
    b, a = raw_gauge_family(model, float(cfg.get("eps", 0.1)), cfg.get("variant", "moving"), 1.1 if ex == "control" else 1.0)
    return sample_gauge_path(model, b, a, nodes)


def _kernel_transversality(model, path):
    G = model.split.G
    worst = 0.0
    for i in range(len(path)):
        Q = _kernel_frames(path.eta_t(i), model.rank)
        cond = _cond(np.concatenate([Q, np.broadcast_to(G, model.grid.shape + G.shape)], axis=-1))
        worst = max(worst, float(np.max(cond)))
    return worst


def cmd_gauge(cfg):
    report = RunReport(cfg)
    kind = cfg.kind or "presym"
    if kind == "foliation":
        if cfg.input:
            times, fields, grid, _ = read_gauge_path(cfg.input)
            if "phi" not in fields or "Y" not in fields:
                raise InputError("foliation gauge path needs fields phi and Y")
            split = load_splitting(cfg, grid)
            path = FoliationGaugePath(times, [GraphMapField(grid, split, v) for v in fields["phi"]], [VectorField(grid, v) for v in fields["Y"]])
        else:
            grid = _grid_for(cfg)
            path = _foliation_example_path(cfg, load_splitting(cfg, grid), grid)
        cond = max(float(np.max(p.transversality_cond())) for p in path.phis)
        report.add(Check("gauge.transversality_cond", cond, cfg.kappa_max))
        v, w = product_involutivity_check(path, return_witness=True)
        report.add(Check("gauge.product_involutivity", v, cfg.tol_gauge, witness=list(w)))
        report.add(Check("gauge.equation_residual", gauge_equation_residual(path), cfg.tol_gauge))
    elif kind == "presym":
        if cfg.input:
            times, fields, grid, _ = read_gauge_path(cfg.input)
            if "beta" not in fields or "alpha" not in fields:
                raise InputError("presym gauge path needs fields beta and alpha")
            model = load_model(cfg, grid)
            try:
                path = gauge_transform(
                    model, times, [FormField(grid, 2, v) for v in fields["beta"]], [FormField(grid, 1, v) for v in fields["alpha"]]
                )
            except SingularityError as exc:
                # leaving I_Z makes the verdict indeterminate rather than negative
                report.add(Check("gauge.path_in_I_Z", exc.cond, cfg.kappa_max, witness=exc.witness, note=str(exc)))
                report.data["verdict"] = "indeterminate"
                report.numerical_failure = True
                return report
        else:
            model = load_model(cfg)
            path = _presym_example_path(cfg, model)
        report.add(Check("gauge.gauge_residual", path.gauge_residual, cfg.tol_gauge, witness=list(path.witness)))
        report.add(Check("gauge.max_mc_residual", max(path.mc_residuals), cfg.tol_mc))
        report.add(Check("gauge.max_rank_deviation", max(path.rank_deviations), 0, "=="))
        report.add(Check("gauge.kernel_transversality_cond", _kernel_transversality(model, path), cfg.kappa_max))
        fpath = gauge_to_foliation_gauge(model, path)
        report.add(Check("gauge.mapped_foliation_product_check", product_involutivity_check(fpath), cfg.tol_gauge))
        report.data["verdict"] = path.verdict(cfg.tol_mc, cfg.tol_gauge)
    else:
        raise InputError(f"unknown gauge kind {kind!r}")
    return report


# -- moser ------------------------------------------------------------------------------------


def cmd_moser(cfg):
    report = RunReport(cfg)
    tol = float(cfg.get("tol_moser", cfg.tol_gauge))
    steps = int(cfg.get("steps", 100))
    if cfg.input:
        times, fields, grid, _ = read_gauge_path(cfg.input)
        model = load_model(cfg, grid)
        path = gauge_transform(
            model, times, [FormField(grid, 2, v) for v in fields["beta"]], [FormField(grid, 1, v) for v in fields["alpha"]]
        )
        res = moser_vector_from_gauge(model, path, steps=steps)
        report.add(Check("moser.isotopy_identity", res.identity_residual, 1e-9))
        report.add(Check("moser.pullback_certificate", res.certificate, tol))
        report.add(Check("moser.kernel_transversality_cond", res.max_cond, cfg.kappa_max))
        return report
    family = cfg.example or "degenerate"
    n = 2 if family == "symplectic" else 3
    grid = TorusGrid(n, cfg.grid_n)
    eta, gamma, split = moser_family(grid, family, float(cfg.get("eps", 0.1)))
    try:
        res = moser_solve(grid, eta, gamma, steps, split, cfg.tau_rank, cfg.kappa_max)
    except SolvabilityError as exc:
        report.add(Check("moser.solvability", 1, 0, "==", witness=list(exc.witness or ()), note=str(exc)))
        return report
    report.add(Check("moser.solvability", 0, 0, "=="))
    report.add(Check("moser.certificate", res.certificate, tol))
    report.add(Check("moser.variation_residual", res.variation_residual, cfg.tol_mc))
    report.add(Check("moser.closedness", res.closedness, cfg.tol_mc))
    if family == "trivial":
        report.add(Check("moser.identity_displacement", float(np.max(np.abs(res.flow.displacement))), 1e-12))
    report.data["switch_times"] = res.switches
    return report


# -- cohomology -------------------------------------------------------------------------------

COHOMOLOGY_EXAMPLES = {"sqrt2": ["1", "sqrt(2)"], "half": ["1", "1/2"], "sqrt2sqrt3": ["1", "sqrt(2)", "sqrt(3)"], "T3rational": ["1", "1/2", "1/3"]}


def _cutoffs(cfg):
    if cfg.get("cutoffs") is not None:
        cuts = [int(c) for c in cfg.get("cutoffs")]
    else:
        top = cfg.cutoff if cfg.cutoff is not None else 16
        cuts = [c for c in (1, 2, 4, 8, 16, 32, 64, 128) if c < top] + [top]
    if not cuts or min(cuts) < 0:
        raise InputError("cutoffs must be non-negative integers")
    return sorted(set(cuts))


def cmd_cohomology(cfg):
    report = RunReport(cfg)
    cuts = _cutoffs(cfg)
    s = float(cfg.get("s", 1.0))
    direction = cfg.get("direction")
    if cfg.example:
        if cfg.example not in COHOMOLOGY_EXAMPLES:
            raise InputError(f"unknown cohomology example {cfg.example!r}; choose from {sorted(COHOMOLOGY_EXAMPLES)}")
        direction = COHOMOLOGY_EXAMPLES[cfg.example]
    if direction is not None:
        target = [str(x) for x in direction]
        vf, C = co.parse_vector(target)
        h1 = {"float": [co.foliated_h1_dim(target, c, "float") for c in cuts]}
        if C is not None:
            h1["exact"] = [co.foliated_h1_dim(target, c, "exact") for c in cuts]
            bad = sum(a != b for a, b in zip(h1["exact"], h1["float"]))
            report.add(Check("cohomology.exact_vs_float_h1", bad, 0, "=="))
        report.data["foliated_h1"] = h1
        report.data["h1_growth"] = co.growth_label(h1.get("exact", h1["float"]))
        report.data["diophantine"] = co.diophantine_scan(target, s, cuts[-1]).as_dict()
        cx = co.ModeComplex.from_direction(target)
    else:
        cx = co._as_complex(load_model(cfg))
    les = co.les_consistency(cx, cuts, s)
    report.add(Check("cohomology.les_discrepancies", les["total_discrepancies"], 0, "=="))
    report.add(Check("cohomology.complex_invariant_defect", les["invariant_defect"], 1e-9))
    report.data["les"] = les
    report.data["hhor_dims"] = {str(p): co.hhor_dim_truncated(cx, p, cuts[-1]) for p in range(cx.n + 1)}
    if cx.n >= 2:
        report.data["tangent"] = co.formal_tangent_report(cx, cuts)
    report.data["sweep_csv"] = _sweep_csv(les["rows"])
    return report


def _sweep_csv(rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(co.SWEEP_COLUMNS)
    for r in rows:
        w.writerow([repr(r[c]) if isinstance(r[c], float) else r[c] for c in co.SWEEP_COLUMNS])
    return buf.getvalue()


# -- cylinder ---------------------------------------------------------------------------------


def _cylinder_example(cfg, rng):
    ex = cfg.example or "mixed"
    N = cfg.grid_n
    nodes = int(cfg.get("nodes", 9))
    if ex == "mixed":
        return cy.mixed_example(N, nodes)
    if ex == "moser-ready":
        return cy.moser_ready_example(N, nodes)
    if ex == "perturbed":
        return cy.moser_ready_example(N, nodes, A_scale=1.1)
    if ex == "symplectic":
        return cy.constant_symplectic_example(N, nodes)
    if ex in cy.FAMILY_KINDS:
        return cy.engineered_family(rng, ex, N, nodes)
    raise InputError(f"unknown cylinder example {ex!r}")


def cmd_cylinder(cfg):
    report = RunReport(cfg)
    rng = np.random.default_rng(cfg.seed)
    if cfg.input:
        times, fields, grid, _ = read_gauge_path(cfg.input)
        if "eta" not in fields or "A" not in fields:
            raise InputError("cylinder input needs fields eta and A")
        theta = cy.CylinderForm(grid, times, fields["eta"], fields["A"])
    else:
        theta = _cylinder_example(cfg, rng)
    mism, dim, _ = cy.rank_formula_mismatches(theta.etas, theta.As, cfg.tau_rank)
    report.add(Check("cylinder.kernel_dimension_mismatches", mism, 0, "=="))
    rule = cy.lemma_two_of_three(theta, cfg.tau_rank)
    report.add(Check("cylinder.two_of_three_consistent", int(rule["consistent"]), 1, "=="))
    cor = cy.cor_presym_cylinder(theta, float(cfg.get("eps_closed", 1e-8)), cfg.tau_rank)
    if cor["applicable"]:
        report.add(Check("cylinder.closed_rank_sides_agree", int(cor["agree"]), 1, "=="))
    case, _, _ = cy.classify(theta.etas, theta.As, cfg.tau_rank)
    report.data["two_of_three"] = rule
    report.data["closed_rank"] = cor
    report.data["case1_fraction_per_node"] = [float(np.mean(c == cy.CASE_IMAGE)) for c in case]
    report.data["kernel_dims_per_node"] = [sorted(set(int(x) for x in np.unique(dm))) for dm in dim]
    return report


# -- selftest ---------------------------------------------------------------------------------


def cmd_selftest(cfg):
    report = RunReport(cfg)
    scale = cfg.get("scale", "full")
    if scale not in ac.SCALES:
        raise InputError(f"unknown scale {scale!r}")
    only = cfg.get("only")
    only = [int(i) for i in only] if only else None
    fault = cfg.get("inject_fault")
    results = ac.run_suite(cfg.seed, scale, only=only, fault=fault)
    if fault and not any(c.name == fault for r in results for c in r["checks"]):
        raise InputError(f"--inject-fault {fault!r} names no check in this run")
    for r in results:
        report.add(*r["checks"])
    report.data["criteria"] = [
        {"id": r["id"], "title": r["title"], "passed": all(c.passed for c in r["checks"])} for r in results
    ]
    report.data["summary"] = ac.summary_lines(results)
    return report


COMMANDS = {
    "mc": cmd_mc,
    "gauge": cmd_gauge,
    "moser": cmd_moser,
    "cohomology": cmd_cohomology,
    "cylinder": cmd_cylinder,
    "selftest": cmd_selftest,
}


# -- plumbing ---------------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def build_parser():
    p = _Parser(prog="presym", description="Deformations of pre-symplectic structures and foliations on tori.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        q = sub.add_parser(name)
        q.add_argument("--model", help="config file (key = JSON lines)")
        q.add_argument("--input", help="torusfield file or gaugepath directory")
        q.add_argument("--grid-n", type=int)
        q.add_argument("--cutoff", type=int)
        q.add_argument("--tol-mc", type=float)
        q.add_argument("--tol-gauge", type=float)
        q.add_argument("--seed", type=int)
        q.add_argument("--out", help="output directory")
        q.add_argument("--format", choices=("json", "csv"))
        q.add_argument("--example", help="built-in example input")
        if name in ("mc", "gauge"):
            q.add_argument("--kind", choices=("foliation", "presym"))
        if name == "selftest":
            q.add_argument("--scale", choices=tuple(ac.SCALES))
            q.add_argument("--only", help="comma-separated criterion ids")
            q.add_argument("--inject-fault", help="name of a check to force into failure")
        q.add_argument("-v", "--verbose", action="store_true")
    return p


def make_config(args):
    settings = read_config(args.model) if args.model else {}
    base = RunConfig(command=args.command)
    if "N" in settings:
        settings.setdefault("grid_n", settings.pop("N"))
    fields = {
        "kind": "kind",
        "input": "input",
        "example": "example",
        "grid_n": "grid_n",
        "cutoff": "cutoff",
        "tol_mc": "tol_mc",
        "tol_gauge": "tol_gauge",
        "tau_alg": "tau_alg",
        "tau_rank": "tau_rank",
        "kappa_max": "kappa_max",
        "seed": "seed",
        "format": "format",
    }
    for attr, key in fields.items():
        if key in settings:
            setattr(base, attr, settings.pop(key))
        val = getattr(args, attr, None)
        if val is not None:
            setattr(base, attr, val)
    base.model = os.path.basename(args.model) if args.model else None
    base.out = args.out
    for extra in ("scale", "inject_fault"):
        if getattr(args, extra, None) is not None:
            settings[extra] = getattr(args, extra)
    if getattr(args, "only", None):
        try:
            settings["only"] = [int(x) for x in args.only.split(",") if x.strip()]
        except ValueError as exc:
            raise InputError(f"--only expects comma-separated criterion ids, got {args.only!r}") from exc
    bad = [i for i in settings.get("only") or () if i not in ac.CRITERIA]
    if bad:
        raise InputError(f"unknown criterion ids {bad}")
    base.settings = settings
    base.validate()
    return base


def render(report, fmt):
    if fmt == "json":
        return json.dumps(report.as_dict(), sort_keys=True, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["name", "value", "threshold", "relation", "passed", "witness"])
    for c in report.checks:
        dct = c.as_dict()
        w.writerow([dct["name"], repr(dct["value"]), repr(dct["threshold"]), dct["relation"], dct["passed"], json.dumps(dct["witness"])])
    return buf.getvalue()


def write_outputs(report, cfg):
    if not cfg.out:
        return
    os.makedirs(cfg.out, exist_ok=True)
    atomic_write(os.path.join(cfg.out, f"report.{cfg.format}"), render(report, cfg.format))
    atomic_write(os.path.join(cfg.out, "timing.json"), json.dumps({"wall_time_s": report.wall_time}, indent=2) + "\n")
    sweep = report.data.get("sweep_csv")
    if sweep:
        atomic_write(os.path.join(cfg.out, "sweep.csv"), sweep)


def _print_summary(report, stream):
    if "summary" in report.data:
        print("\n".join(report.data["summary"]), file=stream)
        print("all criteria passed" if report.passed else "some criteria failed", file=stream)
        return
    for c in report.checks:
        flag = "PASS" if c.passed else "FAIL"
        extra = f" witness={c.witness}" if not c.passed and c.witness is not None else ""
        print(f"{flag}  {c.name}: {c.value!r} {c.relation} {c.threshold!r}{extra}", file=stream)
    print("all checks passed" if report.passed else "some checks failed", file=stream)


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
        cfg = make_config(args)
        start = time.perf_counter()
        report = COMMANDS[cfg.command](cfg)
        report.wall_time = time.perf_counter() - start
        write_outputs(report, cfg)
        _print_summary(report, sys.stdout)
        if report.numerical_failure:
            return EXIT_NUMERIC
        return EXIT_OK if report.passed else EXIT_FAIL
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalError as exc:
        w = f" at {exc.witness}" if getattr(exc, "witness", None) is not None else ""
        print(f"numerical error: {exc}{w}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
