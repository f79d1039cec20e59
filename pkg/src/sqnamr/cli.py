"""Command-line entry point: sqnamr {params,potential,catalog,ideal,steady,sweep,oracle}.

Exit codes: 0 success, 1 out-of-regime or untrusted result, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import device, fock, ideal, langevin, rwa
from ._errors import IntegrationError, UntrustedResult
from .manifest import RunManifest, render_csv, render_json

EXIT_OK, EXIT_REGIME, EXIT_INPUT = 0, 1, 2

POTENTIAL_HEADER = "phi,phi_X_over_Phi0,U_over_EJ"
IDEAL_HEADER = "t,gamma,var_XT_over_deltaX2,uncertainty_product"


class InputError(Exception):
    pass


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("SQNAMR_THREADS", "1")))
    except ValueError:
        return 1


def _load(args) -> device.PhysicalConfig:
    if args.config is None:
        return device.reference_config()
    try:
        return device.load_config(args.config)
    except device.ConfigError as exc:
        field = f" (field: {exc.field})" if exc.field else ""
        raise InputError(f"config error{field}: {exc}") from exc
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read config {args.config}: {exc}") from exc


def _manifest(args, config, grid=None, tolerances=None) -> RunManifest:
    return RunManifest(args.command, args.config, config.to_dict(), args.out,
                       grid or {}, tolerances or {}, args.seed)


def _emit(args, text: str, ext: str):
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{args.command}.{ext}").write_text(text)
    else:
        sys.stdout.write(text)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def _moments_dict(m: langevin.MomentState) -> dict:
    return {f: [complex(getattr(m, f)).real, complex(getattr(m, f)).imag]
            for f in langevin.MOMENT_FIELDS}


# ---------------------------------------------------------------------------

def cmd_params(args) -> int:
    config = _load(args)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        rep = device.feasibility(config)
    notes = [str(w.message) for w in caught]
    rep["warnings"] = notes
    man = _manifest(args, config)
    if args.format == "json":
        _emit(args, render_json(_jsonable(rep), man), "json")
    else:
        d = rep["derived"]
        lines = ["derived quantities (rates in rad/s):"]
        lines += [f"  {k:12s} {v:.6g}" for k, v in d.items()]
        flags = rep["N_max_within_factor2_of_150"]
        lines += [
            f"Phi_X/Phi_0 (declared convention, 1 GHz = 1e9 rad/s): {rep['Phi_X_over_Phi0']:.4e}",
            f"Phi_X/Phi_0 (alternate convention, 1 GHz = 2pi 1e9 rad/s): {rep['Phi_X_over_Phi0_alt_convention']:.4e}",
            f"Phi_X/Phi_0 (h in place of hbar in the zero-point spread): {rep['Phi_X_over_Phi0_planck_h']:.4e}",
            f"N_max declared convention: {rep['N_max']:.2f} (within factor 2 of 150: {flags['declared']})",
            f"N_max alternate convention: {rep['N_max_alt_convention']:.2f} (within factor 2 of 150: {flags['alt']})",
            f"resonance mismatch Omega' - (omega_L + omega_R) at vacuum: {rep['resonance_mismatch']:.4e}",
            f"xi = {rep['xi']:.6g}, regime_ok (xi < kappa/2 for both modes): {rep['regime_ok']}",
            f"E_J / (I_c / 2e) consistency ratio: {rep['E_J_vs_I_c_consistency']:.6f}",
        ]
        lines += [f"warning: {n}" for n in notes]
        _emit(args, "\n".join(lines) + "\n" + man.comment_block(), "txt")
    return EXIT_OK


def cmd_potential(args) -> int:
    config = _load(args)
    if args.ib_over_ic is not None:
        try:
            config = config.replace(I_b=args.ib_over_ic * config.I_c)
        except device.ConfigError as exc:
            raise InputError(str(exc)) from exc
    phi = np.linspace(args.phi_min, args.phi_max, args.n_phi)
    flux = np.linspace(-args.flux_span, args.flux_span, args.n_flux)
    U = device.potential(phi[:, None], flux[None, :] * device.PHI_0, config) / config.E_J
    rows = [(float(p), float(f), float(U[i, j]))
            for i, p in enumerate(phi) for j, f in enumerate(flux)]
    man = _manifest(args, config, grid={"phi": [args.phi_min, args.phi_max, args.n_phi],
                                        "phi_X_over_Phi0": [-args.flux_span, args.flux_span, args.n_flux]})
    _emit(args, render_csv(POTENTIAL_HEADER, rows, man), "csv")
    return EXIT_OK


def cmd_catalog(args) -> int:
    config = _load(args)
    d = device.derive(config)
    terms = rwa.enumerate_terms(d)
    man = _manifest(args, config)
    if args.format == "csv":
        _emit(args, render_csv(rwa.CSV_HEADER, rwa.table_csv_rows(terms), man), "csv")
    elif args.format == "json":
        rep = rwa.completeness_check()
        payload = {"rows": [dict(zip(rwa.CSV_HEADER.split(","), r)) for r in rwa.table_csv_rows(terms)],
                   "completeness_closes": rep.closes,
                   "completeness_summary": rep.summary()}
        _emit(args, render_json(payload, man), "json")
    else:
        text = rwa.format_table(terms) + "\n\n" + rwa.completeness_check().summary() + "\n"
        _emit(args, text + man.comment_block(), "txt")
    return EXIT_OK


def cmd_ideal(args) -> int:
    config = _load(args)
    d = device.derive(config)
    rate = config.alpha_mag * d.eta          # gamma = |alpha| eta t
    if args.t_range is not None:
        ts = np.linspace(*args.t_range[:2], int(args.t_range[2]))
        gammas = rate * ts
    else:
        lo, hi, n = args.gamma_range
        gammas = np.linspace(lo, hi, int(n))
        ts = gammas / rate if rate else np.full_like(gammas, np.nan)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        curve = ideal.ideal_curve(gammas, config.phi_drive, d) if not args.unit_spreads else \
            ideal.ideal_curve(gammas, config.phi_drive, _UnitSpreads())
    rows = [(float(t) + 0.0, g, v, p) for t, (g, v, p) in zip(ts, curve)]
    man = _manifest(args, config, grid={"gamma": [float(gammas[0]), float(gammas[-1]), len(gammas)]})
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    _emit(args, render_csv(IDEAL_HEADER, rows, man), "csv")
    return EXIT_OK


class _UnitSpreads:
    delta_L = delta_R = zeta_L = zeta_R = 1.0


def _damping_from(args, config, d) -> langevin.DampingParams:
    xi = args.xi if args.xi is not None else d.xi
    kL = args.kappa_L if args.kappa_L is not None else config.kappa_L
    kR = args.kappa_R if args.kappa_R is not None else config.kappa_R
    try:
        return langevin.DampingParams(xi, kL, kR)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def cmd_steady(args) -> int:
    config = _load(args)
    d = device.derive(config)
    params = _damping_from(args, config, d)
    man = _manifest(args, config, tolerances={"rtol": langevin.RTOL, "atol": langevin.ATOL})
    payload = {"params": {"xi": params.xi, "kappa_L": params.kappa_L, "kappa_R": params.kappa_R},
               "regime_ok": params.regime_ok}
    if not params.regime_ok:
        payload["error"] = "out of regime: " + ", ".join(params.violated_thresholds())
        _emit(args, render_json(payload, man), "json")
        return EXIT_REGIME
    res = langevin.closed_form_steady_state(params, d)
    payload.update({
        "moments": _moments_dict(res.moments),
        "var_XT_m2": res.var_XT,
        "var_ratio": res.var_ratio,
        "var_XT_over_deltaX2": res.var_XT / (d.delta_L**2 + d.delta_R**2),
        "equal_delta_display_over_deltaX2": langevin.equal_delta_display(params),
        "Delta_xi": res.Delta_xi, "kappa_plus": res.kappa_plus, "kappa_minus": res.kappa_minus,
    })
    if args.check_ode:
        try:
            ode, t_ss = langevin.integrate_to_steady(langevin.MomentState.vacuum(), params)
        except IntegrationError as exc:
            payload["ode_error"] = str(exc)
            _emit(args, render_json(payload, man), "json")
            return EXIT_REGIME
        payload["ode_max_abs_diff"] = ode.max_abs_diff(res.moments)
        payload["ode_t_steady"] = t_ss
    _emit(args, render_json(_jsonable(payload), man), "json")
    return EXIT_OK


def cmd_sweep(args) -> int:
    config = _load(args)
    lo, hi, n = args.kappa_range
    ks = np.linspace(lo, hi, int(n))
    if args.unit_spreads:
        dL = dR = 1.0
    else:
        d = device.derive(config)
        dL, dR = d.delta_L, d.delta_R
    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        chunks = list(pool.map(lambda k: langevin.variance_surface([k], ks, dL, dR), ks))
    pts = [p for chunk in chunks for p in chunk]
    rows = [(p.kappaL_over_xi, p.kappaR_over_xi, p.var_ratio, p.var_XT_over_deltaX2, p.in_regime)
            for p in pts]
    man = _manifest(args, config, grid={"kappa_over_xi": [lo, hi, int(n)]})
    _emit(args, render_csv(langevin.SWEEP_HEADER, rows, man), "csv")
    return EXIT_OK if all(p.in_regime == "true" for p in pts) else EXIT_REGIME


def _oracle_steady(args, params, n_max):
    trunc = fock.TruncationSpec(n_max)
    gen = fock.build_generator(fock.GeneratorSpec.from_damping(params), None, trunc)
    st = fock.steady_state(gen, trunc)
    meas = fock.measure_moments(st)
    cf = langevin.steady_moments(params)
    var_cf = cf.xt_variance(1.0, 1.0)
    deltas = {"var_XT_relative": abs(meas.var_XT - var_cf) / var_cf,
              "L2_relative": abs(meas.moments.L2 - cf.L2) / abs(cf.L2),
              "R2_relative": abs(meas.moments.R2 - cf.R2) / abs(cf.R2),
              "C1_relative": abs(meas.moments.C1 - cf.C1) / max(abs(cf.C1), 1e-300)}
    return trunc, meas, deltas, st.violations()


def _oracle_ideal(args, gamma, n_max):
    trunc = fock.TruncationSpec(n_max)
    gen = fock.build_generator(fock.GeneratorSpec("V_I", coupling=gamma), None, trunc)
    res = fock.evolve(fock.TruncatedState.vacuum(trunc.dims), gen, 1.0, trunc)
    st = res.states[-1]
    stats = fock.collective_stats(st)
    deltas = {"var_XT_over_deltaX2_abs": abs(stats["var_XT_over_deltaX2"] - math.exp(2 * gamma)),
              "normalized_product_abs": abs(stats["normalized_product"] - 1.0)}
    return trunc, fock.measure_moments(st), deltas, st.violations()


def cmd_oracle(args) -> int:
    config = _load(args)
    d = device.derive(config)
    n_max = args.n_max
    if args.compare == "steady":
        params = _damping_from(args, config, d) if args.xi is not None else \
            langevin.DampingParams(0.3, 1.0, 2.0)
        if not params.regime_ok:
            raise UntrustedResult("out of regime: " + ", ".join(params.violated_thresholds()))
        trunc, meas, deltas, viol = _oracle_steady(args, params, n_max or 15)
        tol = args.tol if args.tol is not None else 0.02
        pdict = {"xi": params.xi, "kappa_L": params.kappa_L, "kappa_R": params.kappa_R}
    else:
        gamma = args.gamma
        trunc, meas, deltas, viol = _oracle_ideal(args, gamma, n_max or 40)
        tol = args.tol if args.tol is not None else 1e-4
        pdict = {"gamma": gamma, "phi_drive": -math.pi / 2}
    payload = {
        "compare": args.compare,
        "params": pdict,
        "truncation": {"n_max": trunc.n_max, "modes": trunc.modes,
                       "leakage_bound": trunc.leakage_bound},
        "leakage": meas.leakage,
        "moments": _moments_dict(meas.moments),
        "var_XT": meas.var_XT,
        "comparison_deltas": deltas,
        "state_violations": viol,
        "tolerance": tol,
    }
    ok = all(v < tol for v in deltas.values()) and not viol and meas.leakage <= trunc.leakage_bound
    payload["passed"] = ok
    man = _manifest(args, config, tolerances={"comparison": tol})
    _emit(args, render_json(_jsonable(payload), man), "json")
    return EXIT_OK if ok else EXIT_REGIME


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON PhysicalConfig (SI units); default: built-in feasibility set")
    common.add_argument("--out", help="output directory (default: stdout)")
    common.add_argument("--tol", type=float, help="comparison tolerance")
    common.add_argument("--seed", type=int, default=0, help="recorded in the manifest")
    common.add_argument("--format", choices=("csv", "json", "text"), default=None)

    parser = argparse.ArgumentParser(prog="sqnamr", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("params", parents=[common], help="derived quantities and feasibility report")

    p = sub.add_parser("potential", parents=[common], help="SQUID potential scan as CSV")
    p.add_argument("--phi-min", type=float, default=-math.pi)
    p.add_argument("--phi-max", type=float, default=3 * math.pi)
    p.add_argument("--n-phi", type=int, default=201)
    p.add_argument("--flux-span", type=float, default=0.1, help="half-width of the Phi_X/Phi_0 range")
    p.add_argument("--n-flux", type=int, default=101)
    p.add_argument("--ib-over-ic", type=float, help="override I_b/I_c")

    sub.add_parser("catalog", parents=[common], help="interaction-term table")

    p = sub.add_parser("ideal", parents=[common], help="lossless squeezing curve")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--gamma-range", nargs=3, type=float, metavar=("START", "STOP", "NUM"),
                   default=[0.0, -1.0, 11])
    g.add_argument("--t-range", nargs=3, type=float, metavar=("START", "STOP", "NUM"))
    p.add_argument("--unit-spreads", action="store_true", help="use delta_L = delta_R = 1")

    for name, help_ in (("steady", "closed-form damped steady state"),
                        ("oracle", "truncated-Fock cross-check")):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("--xi", type=float)
        p.add_argument("--kappa-L", type=float)
        p.add_argument("--kappa-R", type=float)
        if name == "steady":
            p.add_argument("--check-ode", action="store_true")
        else:
            p.add_argument("--compare", choices=("steady", "ideal"), default="steady")
            p.add_argument("--gamma", type=float, default=-0.5)
            p.add_argument("--n-max", type=int)

    p = sub.add_parser("sweep", parents=[common], help="steady-state variance over (kappa_L/xi, kappa_R/xi)")
    p.add_argument("--kappa-range", nargs=3, type=float, metavar=("START", "STOP", "NUM"),
                   default=[2.05, 20.0, 40])
    p.add_argument("--unit-spreads", action="store_true", help="use delta_L = delta_R = 1")
    return parser


COMMANDS = {"params": cmd_params, "potential": cmd_potential, "catalog": cmd_catalog,
            "ideal": cmd_ideal, "steady": cmd_steady, "sweep": cmd_sweep, "oracle": cmd_oracle}

DEFAULT_FORMAT = {"params": "text", "catalog": "text", "potential": "csv", "ideal": "csv",
                  "sweep": "csv", "steady": "json", "oracle": "json"}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if args.format is None:
        args.format = DEFAULT_FORMAT[args.command]
    try:
        return COMMANDS[args.command](args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (UntrustedResult, langevin.RegimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REGIME


if __name__ == "__main__":
    sys.exit(main())
