"""Command-line harness: run scenarios, compare observers, tune, analyze.

Subcommands:

    adrc-bench run <config.ini> --out DIR [--seed N]
    adrc-bench compare {1|2} --out DIR [--seed N]
    adrc-bench tune <config.ini> --target-je X --bracket LO HI [--tol T]
    adrc-bench spectrum <run.csv> --out FILE [--min-omega W]
    adrc-bench bound-check <run.csv> <config.ini> [--nu X] [--out FILE]

Exit codes: 0 success, 1 divergence or failed check, 2 configuration error,
3 tuning failure.

Scenario configs are INI documents with sections {plant, trajectory, observer,
controller, noise, disturbance, sim}; see the commented example in the README.
The built-in presets ``scenario1`` (noise-free) and ``scenario2`` (measurement
noise variance 1e-5) encode the full benchmark protocol: double-lag plant,
unit step at 7.5 s through the 5-lag filter, disturbance 2.5 sin(15 t) from
5 s, controller gains k_p = k_d = 4 gated on at 1 s, 20 s horizon at 1 ms.
"""

from __future__ import annotations

import argparse
import configparser
import sys
from pathlib import Path

import numpy as np

from .analysis import BracketError, bound_check, dominant_peak, error_spectrum, tune_omega
from .control import ControllerParams
from .observers import LuenbergerEso, make_observer, observer_tag
from .plant import ModelEstimate, preset_double_lag, sinusoidal_disturbance, constant_disturbance
from .simkernel import ConfigError, ScenarioConfig, read_csv, run_scenario, write_csv, write_summary
from .trajectory import FilteredStepGen, SinusoidGen

VARIANTS = ("eso3", "eso5", "reso", "am_eso3", "am_eso5", "am_reso")

# Benchmark gain tables: omega_o per observer, chosen upstream so that every
# observer reaches the same tracking cost J_e in its scenario.
TABLE1_OMEGA = {
    "eso3": 490.03,
    "eso5": 68.58,
    "reso": 27.32,
    "am_eso3": 818.86,
    "am_eso5": 340.27,
    "am_reso": 129.61,
}
TABLE2_OMEGA = {
    "eso3": 586.76,
    "eso5": 76.94,
    "reso": 31.52,
    "am_eso3": 1057.46,
    "am_eso5": 352.48,
    "am_reso": 140.34,
}

SCENARIO_OMEGA = {1: TABLE1_OMEGA, 2: TABLE2_OMEGA}
SCENARIO_SIGMA = {1: 0.0, 2: 1e-5}
DISTURBANCE_RATE = 15.0


def scenario_config(
    scenario: int,
    variant: str,
    omega_o: float | None = None,
    seed: int = 0,
    sigma_w: float | None = None,
    t_sim: float = 20.0,
    dt: float = 1e-3,
) -> ScenarioConfig:
    """Built-in benchmark preset for the given scenario and observer tag."""
    if scenario not in SCENARIO_OMEGA:
        raise ConfigError(f"unknown scenario {scenario!r}; expected 1 or 2")
    if variant not in VARIANTS:
        raise ConfigError(f"unknown observer variant {variant!r}")
    omega = SCENARIO_OMEGA[scenario][variant] if omega_o is None else omega_o
    sigma = SCENARIO_SIGMA[scenario] if sigma_w is None else sigma_w
    return ScenarioConfig(
        plant=preset_double_lag(sinusoidal_disturbance(2.5, DISTURBANCE_RATE, 5.0)),
        trajectory=FilteredStepGen(step_time=7.5, amplitude=1.0),
        observer=make_observer(variant, omega, omega_r=DISTURBANCE_RATE),
        estimate=ModelEstimate(j_hat=1.0),
        controller=ControllerParams(k_p=4.0, k_d=4.0, t_on=1.0),
        sigma_w=sigma,
        t_sim=t_sim,
        dt=dt,
        seed=seed,
    )


_SCHEMA = {
    "plant": {"preset"},
    "trajectory": {"kind", "step_time", "amplitude", "angular_rate"},
    "observer": {"variant", "omega_o", "omega_r", "alpha1", "alpha2", "alpha3", "alpha4"},
    "controller": {"k_p", "k_d", "t_on", "j_hat", "h_m_hat"},
    "noise": {"kind", "variance"},
    "disturbance": {"kind", "amplitude", "angular_rate", "start_time"},
    "sim": {"t_sim", "dt", "seed"},
}


def _get_float(section, key: str, default: float | None = None) -> float:
    raw = section.get(key)
    if raw is None:
        if default is None:
            raise ConfigError(f"{section.name}.{key} required")
        return default
    try:
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"{section.name}.{key}: not a number: {raw!r}") from exc


def parse_config_file(path) -> ScenarioConfig:
    """Parse and validate an INI scenario document into a ScenarioConfig."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    text = Path(path).read_text(encoding="utf-8")
    try:
        parser.read_string(text, source=str(path))
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from exc

    for sec in parser.sections():
        if sec not in _SCHEMA:
            raise ConfigError(f"unknown section: {sec}")
        for key in parser[sec]:
            if key not in _SCHEMA[sec]:
                raise ConfigError(f"unknown key: {sec}.{key}")

    if "observer" not in parser or "variant" not in parser["observer"]:
        raise ConfigError("observer.variant required")
    obs_sec = parser["observer"]
    variant = obs_sec["variant"].strip()
    if variant not in VARIANTS:
        raise ConfigError(f"observer.variant: unknown variant {variant!r}")
    omega_o = _get_float(obs_sec, "omega_o")
    omega_r = _get_float(obs_sec, "omega_r", DISTURBANCE_RATE)
    alphas = None
    alpha_keys = [k for k in ("alpha1", "alpha2", "alpha3", "alpha4") if k in obs_sec]
    if alpha_keys:
        alphas = []
        for key in alpha_keys:
            parts = obs_sec[key].split()
            if len(parts) != 2:
                raise ConfigError(f"observer.{key}: expected two numbers")
            alphas.append(np.array([float(p) for p in parts]))
    try:
        observer = make_observer(variant, omega_o, omega_r=omega_r, alphas=alphas)
    except ValueError as exc:
        raise ConfigError(f"observer: {exc}") from exc

    plant_sec = parser["plant"] if "plant" in parser else {}
    preset = plant_sec.get("preset", "double_lag")
    if preset != "double_lag":
        raise ConfigError(f"plant.preset: unknown preset {preset!r}")

    dist = parser["disturbance"] if "disturbance" in parser else None
    if dist is not None:
        kind = dist.get("kind", "sinusoid")
        amplitude = _get_float(dist, "amplitude", 0.0)
        start = _get_float(dist, "start_time", 5.0)
        if kind == "sinusoid":
            rate = _get_float(dist, "angular_rate", DISTURBANCE_RATE)
            schedule = sinusoidal_disturbance(amplitude, rate, start)
        elif kind == "constant":
            schedule = constant_disturbance(amplitude, start)
        else:
            raise ConfigError(f"disturbance.kind: unknown kind {kind!r}")
    else:
        schedule = None
    plant = preset_double_lag(schedule)

    traj_sec = parser["trajectory"] if "trajectory" in parser else None
    kind = traj_sec.get("kind", "filtered_step") if traj_sec is not None else "filtered_step"
    if kind == "filtered_step":
        step_time = _get_float(traj_sec, "step_time", 7.5) if traj_sec is not None else 7.5
        amplitude = _get_float(traj_sec, "amplitude", 1.0) if traj_sec is not None else 1.0
        trajectory = FilteredStepGen(step_time, amplitude)
    elif kind == "sinusoid":
        amplitude = _get_float(traj_sec, "amplitude")
        rate = _get_float(traj_sec, "angular_rate")
        trajectory = SinusoidGen(amplitude, rate)
    elif kind == "none":
        trajectory = SinusoidGen(0.0, 1.0)
    else:
        raise ConfigError(f"trajectory.kind: unknown kind {kind!r}")

    ctl_sec = parser["controller"] if "controller" in parser else None
    k_p = _get_float(ctl_sec, "k_p", 4.0) if ctl_sec is not None else 4.0
    k_d = _get_float(ctl_sec, "k_d", 4.0) if ctl_sec is not None else 4.0
    t_on = _get_float(ctl_sec, "t_on", 1.0) if ctl_sec is not None else 1.0
    j_hat = _get_float(ctl_sec, "j_hat", 1.0) if ctl_sec is not None else 1.0
    hm_mode = ctl_sec.get("h_m_hat", "zero") if ctl_sec is not None else "zero"
    if hm_mode not in ("zero", "plant"):
        raise ConfigError(f"controller.h_m_hat: expected 'zero' or 'plant', got {hm_mode!r}")
    try:
        modeled_hat = plant.modeled if hm_mode == "plant" else None
        estimate = ModelEstimate(j_hat=j_hat) if modeled_hat is None else ModelEstimate(
            j_hat=j_hat, modeled_hat=modeled_hat)
        controller = ControllerParams(k_p=k_p, k_d=k_d, t_on=t_on)
    except ValueError as exc:
        raise ConfigError(f"controller: {exc}") from exc

    noise_sec = parser["noise"] if "noise" in parser else None
    if noise_sec is not None:
        nkind = noise_sec.get("kind", "gaussian")
        if nkind == "none":
            sigma_w = 0.0
        elif nkind == "gaussian":
            sigma_w = _get_float(noise_sec, "variance", 0.0)
        else:
            raise ConfigError(f"noise.kind: expected 'none' or 'gaussian', got {nkind!r}")
    else:
        sigma_w = 0.0

    sim_sec = parser["sim"] if "sim" in parser else None
    t_sim = _get_float(sim_sec, "t_sim", 20.0) if sim_sec is not None else 20.0
    dt = _get_float(sim_sec, "dt", 1e-3) if sim_sec is not None else 1e-3
    seed = int(_get_float(sim_sec, "seed", 0.0)) if sim_sec is not None else 0

    cfg = ScenarioConfig(
        plant=plant,
        trajectory=trajectory,
        observer=observer,
        estimate=estimate,
        controller=controller,
        sigma_w=sigma_w,
        t_sim=t_sim,
        dt=dt,
        seed=seed,
    )
    cfg.validate()
    return cfg


def cmd_run(args) -> int:
    cfg = parse_config_file(args.config)
    if args.seed is not None:
        cfg.seed = args.seed
    cfg.validate()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    record = run_scenario(cfg)
    write_csv(record, out / "run.csv")
    write_summary(out / "summary.txt", record, cfg)
    if record.diverged:
        print(f"run diverged at t = {record.t[-1]:.6g} s", file=sys.stderr)
        return 1
    print(f"observer={observer_tag(cfg.observer)} omega_o={cfg.observer.omega_o:g} "
          f"J_e={record.j_e:.6g} J_u={record.j_u:.6g} J_f={record.j_f:.6g}")
    return 0


def cmd_compare(args) -> int:
    scenario = args.scenario
    if scenario not in (1, 2):
        raise ConfigError(f"unknown scenario {scenario!r}; expected 1 or 2")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    for i, variant in enumerate(VARIANTS):
        cfg = scenario_config(scenario, variant, seed=args.seed + i)
        record = run_scenario(cfg)
        if record.diverged:
            print(f"{variant}: diverged", file=sys.stderr)
            return 1
        rows.append((variant, cfg.observer.omega_o, record.j_e, record.j_u, record.j_f))
    table_path = out / f"compare_scenario{scenario}.csv"
    with open(table_path, "w", encoding="utf-8") as fh:
        fh.write("observer,omega_o,J_e,J_u,J_f\n")
        for tag, omega, j_e, j_u, j_f in rows:
            fh.write(f"{tag},{omega:.17g},{j_e:.17g},{j_u:.17g},{j_f:.17g}\n")
    print(f"{'observer':10s} {'omega_o':>9s} {'J_e':>10s} {'J_u':>10s} {'J_f':>10s}")
    for tag, omega, j_e, j_u, j_f in rows:
        print(f"{tag:10s} {omega:9.2f} {j_e:10.5f} {j_u:10.3f} {j_f:10.4f}")
    print(f"table written to {table_path}")
    return 0


def cmd_tune(args) -> int:
    base = parse_config_file(args.config)
    tag = observer_tag(base.observer)
    alphas = getattr(base.observer, "alphas", None)
    omega_r = base.observer.structure.omega_r or None

    def make_config(omega: float) -> ScenarioConfig:
        return replace(base, observer=make_observer(tag, omega, omega_r=omega_r, alphas=alphas))

    result = tune_omega(
        args.target_je, make_config, (args.bracket[0], args.bracket[1]), tol=args.tol
    )
    status = "converged" if result.converged else "iteration cap reached"
    print(f"omega_o = {result.omega_o:.6g}  J_e = {result.j_e:.6g}  "
          f"({result.evaluations} runs, {status})")
    return 0


def cmd_spectrum(args) -> int:
    record = read_csv(args.run_csv)
    dt = float(record.t[1] - record.t[0])
    omega, magnitude = error_spectrum(record.e, dt)
    peak_omega, peak_mag = dominant_peak(omega, magnitude, min_omega=args.min_omega)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write("omega_rad_s,magnitude\n")
        for w, m in zip(omega, magnitude):
            fh.write(f"{w:.17g},{m:.17g}\n")
    print(f"dominant peak at omega = {peak_omega:.4g} rad/s (magnitude {peak_mag:.4g}); "
          f"spectrum written to {args.out}")
    return 0


def cmd_bound_check(args) -> int:
    if not 0.0 < args.nu < 1.0:
        raise ConfigError(f"nu must lie in (0, 1), got {args.nu}")
    cfg = parse_config_file(args.config)
    obs = cfg.observer
    if not (isinstance(obs, LuenbergerEso) and obs.structure.variant == "standard3"):
        raise ConfigError("bound-check applies to the eso3 (3rd-order Luenberger) variant only")
    record = read_csv(args.run_csv)
    report = bound_check(record, obs.omega_o, nu=args.nu)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write("t,actual,bound\n")
            for t, a, b in zip(report.t, report.actual, report.bound):
                fh.write(f"{t:.17g},{a:.17g},{b:.17g}\n")
    verdict = "PASS" if report.passed else "FAIL"
    print(f"{verdict}: min margin (bound - actual) = {report.min_margin:.6g}, "
          f"sup|df/dt| = {report.sup_fdot:.6g}, sup|w| = {report.sup_w:.6g}")
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="adrc-bench", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one scenario config")
    p_run.add_argument("config")
    p_run.add_argument("--out", required=True)
    p_run.add_argument("--seed", type=int, default=None)
    p_run.set_defaults(func=cmd_run)

    p_cmp = sub.add_parser("compare", help="run all six observers of a benchmark scenario")
    p_cmp.add_argument("scenario", type=int)
    p_cmp.add_argument("--out", required=True)
    p_cmp.add_argument("--seed", type=int, default=0)
    p_cmp.set_defaults(func=cmd_compare)

    p_tune = sub.add_parser("tune", help="find omega_o matching a target J_e")
    p_tune.add_argument("config")
    p_tune.add_argument("--target-je", type=float, required=True, dest="target_je")
    p_tune.add_argument("--bracket", type=float, nargs=2, required=True)
    p_tune.add_argument("--tol", type=float, default=0.01)
    p_tune.set_defaults(func=cmd_tune)

    p_spec = sub.add_parser("spectrum", help="error magnitude spectrum of a run log")
    p_spec.add_argument("run_csv")
    p_spec.add_argument("--out", required=True)
    p_spec.add_argument("--min-omega", type=float, default=0.0, dest="min_omega")
    p_spec.set_defaults(func=cmd_spectrum)

    p_bnd = sub.add_parser("bound-check", help="verify the observation-error envelope on a run log")
    p_bnd.add_argument("run_csv")
    p_bnd.add_argument("config")
    p_bnd.add_argument("--nu", type=float, default=0.5)
    p_bnd.add_argument("--out", default=None)
    p_bnd.set_defaults(func=cmd_bound_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except BracketError as exc:
        print(f"tuning failure: {exc}", file=sys.stderr)
        return 3
    except FileNotFoundError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
