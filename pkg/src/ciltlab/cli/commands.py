"""The experiment subcommands.

Each command echoes its inputs, builds the library objects, and returns an
``Outcome``; ``run_experiment`` does the reporting.
"""

from __future__ import annotations

import math

import click
import numpy as np

from ..coulomb import (
    ChargedSite,
    MorrisParams,
    coulomb_quadrature,
    fyodorov_bouchaud,
    mixed_integral_mc,
    morris_closed_form,
    selberg_mc,
    selberg_quadrature,
)
from ..correlator import (
    CorrelatorConfig,
    annulus_topological_sum,
    clear_base_point,
    disk_correlator,
    spin_angle,
    spin_phase,
    term_table,
    weyl_constant_rho_check,
)
from ..geometry import gauss_bonnet_defect, make_factor, make_surface
from ..gff import BoundaryModes, harmonic_extension_dtn, sample_boundary_values, truncated_covariance
from ..gmc import (
    GmcRegion,
    GmcSpec,
    gmc_estimate,
    gmc_first_moment,
    gmc_second_moment,
    indicator,
    l2_gap,
    second_moment_estimate,
    unit_weight,
)
from ..params import conformal_weights, neutrality_solutions, rational_regime
from ..topology import annulus_form, anomaly, anomaly_step, lattice_offset, radial_family, random_family, theta_sum
from .options import (
    build_charges,
    build_params,
    charge_options,
    param_options,
    parse_complexes,
    parse_floats,
    parse_ints,
    pop_charge_args,
    pop_param_args,
    run_options,
)
from .report import Outcome, RunSettings, run_experiment

RUN_KEYS = ("seed", "n_samples", "threads", "chunk_size", "out", "csv_path", "timing", "verify")


def _run(ctx: click.Context, name: str, inputs: dict, compute, kwargs: dict) -> None:
    run_args = {k: kwargs.pop(k) for k in RUN_KEYS}
    run_experiment(ctx, name, inputs, compute, **run_args)


@click.command("params")
@param_options
@run_options
@click.pass_context
def params_cmd(ctx: click.Context, **kwargs) -> None:
    """Validate theory parameters and print Q, c_L and the constraints."""
    args = pop_param_args(kwargs)

    def compute(_: RunSettings) -> Outcome:
        p = build_params(**args)
        return Outcome({**p.to_dict(), "constraints_ok": True, "rational_regime": rational_regime(p.beta)})

    _run(ctx, "params", args, compute, kwargs)


@click.command("gauss-bonnet")
@click.option("--surface", type=click.Choice(["disk", "half_disk", "annulus"]), default="disk")
@click.option("--inner-radius", type=float, default=None)
@click.option("--metric", type=click.Choice(["flat", "constant", "hemisphere", "bump", "harmonic"]), default="flat")
@click.option("--metric-arg", default="", help="c for constant, a for bump, coefficients for harmonic.")
@click.option("--order", type=int, default=64, help="Quadrature order.")
@run_options
@click.pass_context
def gauss_bonnet_cmd(ctx: click.Context, surface: str, inner_radius, metric: str, metric_arg: str, order: int, **kwargs) -> None:
    """Gauss-Bonnet defect of a conformal metric on a flat surface."""
    inputs = {"surface": surface, "inner_radius": inner_radius, "metric": metric, "metric_arg": metric_arg, "order": order}

    def compute(_: RunSettings) -> Outcome:
        values = parse_floats(metric_arg)
        match metric:
            case "constant":
                rho = make_factor(metric, c=values[0] if values else 0.0)
            case "bump":
                rho = make_factor(metric, a=values[0] if values else 0.1)
            case "harmonic":
                rho = make_factor(metric, coefficients=tuple(values) or (0.0,))
            case _:
                rho = make_factor(metric)
        s = make_surface(surface, inner_radius)
        return Outcome({"defect": gauss_bonnet_defect(s, rho, order), "euler_char": s.euler_char})

    _run(ctx, "gauss-bonnet", inputs, compute, kwargs)


@click.command("anomaly")
@click.option("--inner-radius", type=float, default=0.3)
@click.option("--punctures", default="0.6,-0.5+0.2j")
@click.option("--windings", default="1,-2")
@click.option("--pairs", type=int, default=20, help="Random family pairs.")
@run_options
@click.pass_context
def anomaly_cmd(ctx: click.Context, inner_radius: float, punctures: str, windings: str, pairs: int, **kwargs) -> None:
    """Curvature anomaly between random separating families on the annulus."""
    inputs = {"inner_radius": inner_radius, "punctures": punctures, "windings": windings, "pairs": pairs}

    def compute(run: RunSettings) -> Outcome:
        s = make_surface("annulus", inner_radius, parse_complexes(punctures))
        m = parse_ints(windings)
        rng = np.random.default_rng(run.seed)
        rows = []
        worst = 0.0
        for j in range(pairs):
            a, b = random_family(s, rng), random_family(s, rng)
            k = int(rng.integers(-2, 3))
            form = annulus_form(s, m, k)
            base = clear_base_point(a, b)
            value = anomaly(form, a, b, base)
            step = anomaly_step(a)
            worst = max(worst, lattice_offset(value, step))
            rows.append({"term_id": str(j), "value_re": value, "value_im": 0.0, "stderr": 0.0, "n_samples": 0})
        return Outcome({"pairs": pairs, "max_lattice_distance": worst, "step": math.pi}, rows)

    _run(ctx, "anomaly", inputs, compute, kwargs)


@click.command("theta-sum")
@click.option("--inner-radius", type=float, default=math.exp(-1.0))
@click.option("--radius", type=float, default=2.0, help="Compactification radius R; the weight is pi R^2.")
@click.option("--punctures", default="")
@click.option("--windings", default="")
@run_options
@click.pass_context
def theta_sum_cmd(ctx: click.Context, inner_radius: float, radius: float, punctures: str, windings: str, **kwargs) -> None:
    """Lattice sum of exp(-pi R^2 |omega|^2_reg) over the annulus classes."""
    inputs = {"inner_radius": inner_radius, "radius": radius, "punctures": punctures, "windings": windings}

    def compute(_: RunSettings) -> Outcome:
        s = make_surface("annulus", inner_radius, parse_complexes(punctures))
        return Outcome({"value": theta_sum(s, parse_ints(windings), math.pi * radius * radius)})

    _run(ctx, "theta-sum", inputs, compute, kwargs)


@click.command("gff-cov")
@click.option("--kind", type=click.Choice(["circle", "half_circle"]), default="circle")
@click.option("--modes", type=int, default=2048)
@click.option("--theta", type=float, default=0.0)
@click.option("--theta-prime", type=float, default=math.pi)
@run_options
@click.pass_context
def gff_cov_cmd(ctx: click.Context, kind: str, modes: int, theta: float, theta_prime: float, **kwargs) -> None:
    """Sample covariance of the boundary field series at two angles."""
    inputs = {"kind": kind, "modes": modes, "theta": theta, "theta_prime": theta_prime}

    def compute(run: RunSettings) -> Outcome:
        values = sample_boundary_values(kind, modes, [theta, theta_prime], run.n_samples, run.seed, run.chunk_size, run.threads)
        products = values[:, 0] * values[:, 1]
        estimate = float(np.mean(products))
        stderr = float(np.std(products, ddof=1) / math.sqrt(products.size))
        exact = truncated_covariance(kind, modes, theta, theta_prime)
        return Outcome(
            {"covariance": estimate, "stderr": stderr, "n_samples": run.n_samples, "truncated": exact, "z_score": abs(estimate - exact) / stderr}
        )

    _run(ctx, "gff-cov", inputs, compute, kwargs)


@click.command("dtn")
@click.option("--cos", "cos_modes", default="0,1", help="Cosine coefficients a_1, a_2, ...")
@click.option("--sin", "sin_modes", default="", help="Sine coefficients b_1, b_2, ...")
@run_options
@click.pass_context
def dtn_cmd(ctx: click.Context, cos_modes: str, sin_modes: str, **kwargs) -> None:
    """Dirichlet energy of the harmonic extension against the |n| multiplier."""
    inputs = {"cos": cos_modes, "sin": sin_modes}

    def compute(_: RunSettings) -> Outcome:
        modes = BoundaryModes(0.0, tuple(parse_floats(cos_modes)), tuple(parse_floats(sin_modes)))
        ext = harmonic_extension_dtn(modes)
        return Outcome(
            {
                "energy": ext.dirichlet_energy,
                "quadrature_energy": ext.quadrature_energy,
                "residual": abs(ext.dirichlet_energy - ext.quadrature_energy),
            }
        )

    _run(ctx, "dtn", inputs, compute, kwargs)


def _gmc_spec(region: str, beta: float, epsilon: float, support: float, window: float | None) -> GmcSpec:
    weight = unit_weight if window is None else indicator(window)
    return GmcSpec(GmcRegion(region), beta, epsilon, weight, support)


@click.command("gmc-moment")
@click.option("--region", type=click.Choice(["bulk", "boundary"]), default="bulk")
@click.option("--beta", type=float, required=True)
@click.option("--epsilon", type=float, default=0.01)
@click.option("--support", type=float, default=0.5, help="Radius of the bulk integration disk.")
@click.option("--window", type=float, default=None, help="Weight = indicator of |z| <= window.")
@click.option("--nodes", type=int, default=16, help="Quadrature nodes per sample.")
@click.option("--scheme", type=click.Choice(["random", "grid"]), default="random")
@click.option("--second/--first", default=False, help="Estimate E|M|^2 instead of E M.")
@run_options
@click.pass_context
def gmc_moment_cmd(ctx, region, beta, epsilon, support, window, nodes, scheme, second, **kwargs) -> None:
    """Imaginary chaos moment by Monte Carlo against its quadrature oracle."""
    inputs = {
        "region": region, "beta": beta, "epsilon": epsilon, "support": support,
        "window": window, "nodes": nodes, "scheme": scheme, "second": second,
    }

    def compute(run: RunSettings) -> Outcome:
        spec = _gmc_spec(region, beta, epsilon, support, window)
        if second:
            est = second_moment_estimate(spec, nodes, run.n_samples, run.seed, run.chunk_size, run.threads)
            oracle = gmc_second_moment(spec, limit=False)
        else:
            est = gmc_estimate(spec, nodes, run.n_samples, run.seed, scheme, run.chunk_size, run.threads)
            oracle = gmc_first_moment(spec)
        return Outcome({"estimate": est, "oracle": oracle, "z_score": est.z_score(oracle)})

    _run(ctx, "gmc-moment", inputs, compute, kwargs)


@click.command("gmc-gap")
@click.option("--region", type=click.Choice(["bulk", "boundary"]), default="bulk")
@click.option("--beta", type=float, required=True)
@click.option("--epsilons", default="0.02,0.01,0.005")
@click.option("--support", type=float, default=0.5)
@click.option("--window", type=float, default=None)
@run_options
@click.pass_context
def gmc_gap_cmd(ctx, region, beta, epsilons, support, window, **kwargs) -> None:
    """L2 distance between chaos regularizations at successive scales."""
    inputs = {"region": region, "beta": beta, "epsilons": epsilons, "support": support, "window": window}

    def compute(_: RunSettings) -> Outcome:
        eps = parse_floats(epsilons)
        spec = _gmc_spec(region, beta, eps[0], support, window)
        gaps = [l2_gap(spec, a, b) for a, b in zip(eps, eps[1:])]
        decreasing = all(y < x for x, y in zip(gaps, gaps[1:]))
        return Outcome({"gaps": gaps, "decreasing": decreasing, "limit_second_moment": gmc_second_moment(spec, limit=True)})

    _run(ctx, "gmc-gap", inputs, compute, kwargs)


@click.command("morris")
@click.option("--q", "q", type=int, required=True)
@click.option("--beta", type=float, required=True)
@click.option("--eta", type=float, default=0.0)
@run_options
@click.pass_context
def morris_cmd(ctx, q, beta, eta, **kwargs) -> None:
    """Morris closed form of the boundary screening integral against Monte Carlo."""
    inputs = {"q": q, "beta": beta, "eta": eta}

    def compute(run: RunSettings) -> Outcome:
        params = MorrisParams.from_charges(q, eta, beta).check()
        closed = morris_closed_form(params)
        est = selberg_mc(q, 2.0 * params.a, 2.0 * params.c, 1.0, run.n_samples, run.seed, run.chunk_size, run.threads)
        return Outcome({"closed_form": closed, "estimate": est, "z_score": est.z_score(closed)})

    _run(ctx, "morris", inputs, compute, kwargs)


@click.command("selberg")
@click.option("--q", "q", type=int, required=True)
@click.option("--beta", type=float, required=True)
@click.option("--eta", type=float, default=0.0)
@run_options
@click.pass_context
def selberg_cmd(ctx, q, beta, eta, **kwargs) -> None:
    """Normalized circle Selberg integral: closed form, quadrature and Monte Carlo."""
    inputs = {"q": q, "beta": beta, "eta": eta}

    def compute(run: RunSettings) -> Outcome:
        params = MorrisParams.from_charges(q, eta, beta).check()
        closed = morris_closed_form(params)
        est = selberg_mc(q, 2.0 * params.a, 2.0 * params.c, 1.0, run.n_samples, run.seed, run.chunk_size, run.threads)
        result = {"closed_form": closed, "estimate": est, "z_score": est.z_score(closed)}
        if eta == 0.0:
            result["fyodorov_bouchaud"] = fyodorov_bouchaud(q, beta)
        if q <= 2:
            quad = selberg_quadrature(q, 2.0 * params.a, 2.0 * params.c)
            result["quadrature"] = quad
            result["quadrature_rel_error"] = abs(quad - closed) / abs(closed)
        return Outcome(result)

    _run(ctx, "selberg", inputs, compute, kwargs)


@click.command("mixed-integral")
@click.option("--p", "p", type=int, required=True)
@click.option("--q", "q", type=int, required=True)
@click.option("--alpha", type=float, default=0.0)
@click.option("--eta", type=float, default=0.0)
@click.option("--beta", type=float, required=True)
@run_options
@click.pass_context
def mixed_integral_cmd(ctx, p, q, alpha, eta, beta, **kwargs) -> None:
    """Mixed bulk-boundary Coulomb integral with alpha at 0 and eta at 1."""
    inputs = {"p": p, "q": q, "alpha": alpha, "eta": eta, "beta": beta}

    def compute(run: RunSettings) -> Outcome:
        est = mixed_integral_mc(p, q, alpha, eta, beta, run.n_samples, run.seed, run.chunk_size, run.threads)
        result = {"estimate": est}
        if p + q <= 1:
            sites = [ChargedSite(0j, alpha), ChargedSite(1.0 + 0j, eta / 2.0)]
            quad = coulomb_quadrature(p, q, beta, sites)
            result["quadrature"] = quad
            result["z_score"] = est.z_score(quad)
        return Outcome(result)

    _run(ctx, "mixed-integral", inputs, compute, kwargs)


def _correlator_config(params_args: dict, charge_args: dict, run: RunSettings, backend: str, epsilon: float) -> CorrelatorConfig:
    return CorrelatorConfig(
        params=build_params(**params_args),
        charges=build_charges(**charge_args),
        backend=backend,
        epsilon=epsilon,
        n_samples=run.n_samples,
        seed=run.seed,
        chunk_size=run.chunk_size,
        threads=run.threads,
    )


@click.command("correlator")
@click.option("--surface", type=click.Choice(["disk"]), default="disk")
@param_options
@charge_options
@click.option("--backend", type=click.Choice(["coulomb_gas", "monte_carlo"]), default="coulomb_gas")
@click.option("--epsilon", type=float, default=0.01)
@run_options
@click.pass_context
def correlator_cmd(ctx, surface, backend, epsilon, **kwargs) -> None:
    """Disk correlation function with its neutrality set and term table."""
    params_args, charge_args = pop_param_args(kwargs), pop_charge_args(kwargs)
    inputs = {"surface": surface, "backend": backend, "epsilon": epsilon, **params_args, **charge_args}

    def compute(run: RunSettings) -> Outcome:
        result = disk_correlator(_correlator_config(params_args, charge_args, run, backend, epsilon))
        value = complex(result.value)
        return Outcome(
            {
                "value": value,
                "stderr": result.stderr,
                "neutrality_set": sorted([list(t) for t in result.neutrality_set]),
                "n_samples": run.n_samples,
            },
            term_table(result),
        )

    _run(ctx, "correlator", inputs, compute, kwargs)


@click.command("weyl-check")
@param_options
@charge_options
@click.option("--rho", type=float, default=0.3, help="Constant conformal factor.")
@run_options
@click.pass_context
def weyl_check_cmd(ctx, rho, **kwargs) -> None:
    """Constant Weyl identity residual over the neutrality set."""
    params_args, charge_args = pop_param_args(kwargs), pop_charge_args(kwargs)
    inputs = {"rho": rho, **params_args, **charge_args}

    def compute(run: RunSettings) -> Outcome:
        config = _correlator_config(params_args, charge_args, run, "coulomb_gas", 0.01)
        residual = weyl_constant_rho_check(config, rho)
        return Outcome({"residual": residual, "neutrality_set": sorted([list(t) for t in neutrality_solutions(config.params, config.charges, 1)])})

    _run(ctx, "weyl-check", inputs, compute, kwargs)


@click.command("spin")
@param_options
@charge_options
@click.option("--theta", default="", help="Rotation angle per bulk insertion.")
@run_options
@click.pass_context
def spin_cmd(ctx, theta, **kwargs) -> None:
    """Phase from rotating the tangent vectors at the bulk insertions."""
    params_args, charge_args = pop_param_args(kwargs), pop_charge_args(kwargs)
    inputs = {"theta": theta, **params_args, **charge_args}

    def compute(_: RunSettings) -> Outcome:
        params, charges = build_params(**params_args), build_charges(**charge_args)
        angles = parse_floats(theta)
        weights = [conformal_weights(params, c.alpha, c.m).delta_bulk for c in charges.bulk]
        return Outcome({"phase": spin_phase(charges, params, angles), "angle": spin_angle(charges, params, angles), "weights": weights})

    _run(ctx, "spin", inputs, compute, kwargs)


@click.command("annulus-weight")
@click.option("--inner-radius", type=float, default=math.exp(-1.0))
@param_options
@charge_options
@click.option("--family", type=click.Choice(["radial", "random"]), default="radial")
@run_options
@click.pass_context
def annulus_weight_cmd(ctx, inner_radius, family, **kwargs) -> None:
    """Topological weights of the annulus lattice and their sum."""
    params_args, charge_args = pop_param_args(kwargs), pop_charge_args(kwargs)
    inputs = {"inner_radius": inner_radius, "family": family, **params_args, **charge_args}

    def compute(run: RunSettings) -> Outcome:
        charges = build_charges(**charge_args)
        surface = make_surface("annulus", inner_radius, [c.position for c in charges.bulk])
        delta = radial_family(surface) if family == "radial" else random_family(surface, np.random.default_rng(run.seed))
        config = CorrelatorConfig(params=build_params(**params_args), charges=charges, surface=surface, seed=run.seed)
        total, terms = annulus_topological_sum(config, delta)
        rows = [
            {"term_id": str(k), "value_re": w.real, "value_im": w.imag, "stderr": 0.0, "n_samples": 0}
            for k, w in terms.items()
        ]
        return Outcome({"sum": total, "terms": len(terms)}, rows)

    _run(ctx, "annulus-weight", inputs, compute, kwargs)


COMMANDS = (
    params_cmd,
    gauss_bonnet_cmd,
    anomaly_cmd,
    theta_sum_cmd,
    gff_cov_cmd,
    dtn_cmd,
    gmc_moment_cmd,
    gmc_gap_cmd,
    morris_cmd,
    selberg_cmd,
    mixed_integral_cmd,
    correlator_cmd,
    weyl_check_cmd,
    spin_cmd,
    annulus_weight_cmd,
)
