"""Command-line entry point.

Subcommands: table, orbit, wip, metric-demo, sup-check, inducing-check,
stable.  Experiment subcommands read a key-value config file; every config
key is also a flag of the same name, and flags win.  Exit codes: 0 success,
2 config error, 3 numerical failure, 4 partial results written.
"""

import argparse
import sys

from . import billiard, observables, stable
from .reportio import ConfigError, PartialResultsError, _FIELD_TYPES, load_config

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_PARTIAL = 4


def _add_config_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--config", default=None, help="key-value config file")
    for key, caster in _FIELD_TYPES.items():
        parser.add_argument(f"--{key.replace('_', '-')}", dest=key, default=None,
                            type=str, help=f"override config key {key}")


def _overrides(args) -> dict:
    return {key: getattr(args, key) for key in _FIELD_TYPES if getattr(args, key, None) is not None}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cusplevy",
        description="Superdiffusive cusp-billiard laboratory: stable limits, "
                    "Skorokhod path metrics, excursion diagnostics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_table = sub.add_parser("table", help="build and validate the billiard table")
    _add_config_flags(p_table)

    p_orbit = sub.add_parser("orbit", help="dump an orbit CSV")
    _add_config_flags(p_orbit)
    p_orbit.add_argument("--nsteps", type=int, default=1000)

    p_wip = sub.add_parser("wip", help="normalized-sum convergence experiment")
    _add_config_flags(p_wip)

    p_demo = sub.add_parser("metric-demo", help="indicator-family distance demo")
    p_demo.add_argument("--which", default="j1_example",
                        choices=["j1_example", "m1_example", "m2_example", "figure_c"])
    p_demo.add_argument("--n-list", default="10,100,1000")
    p_demo.add_argument("--refinement", type=int, default=128)
    p_demo.add_argument("--outdir", default="out")

    p_sup = sub.add_parser("sup-check", help="running-supremum stabilization check")
    _add_config_flags(p_sup)
    p_sup.add_argument("--process", default="observable", choices=["observable", "returns"])

    p_ind = sub.add_parser("inducing-check", help="full-vs-induced two-sample check")
    _add_config_flags(p_ind)

    p_st = sub.add_parser("stable", help="stable-law toolkit")
    p_st.add_argument("action", choices=["sample", "cdf", "ks"])
    p_st.add_argument("--alpha", type=float, required=True)
    p_st.add_argument("--sigma", type=float, default=1.0)
    p_st.add_argument("--x", type=float, default=0.0)
    p_st.add_argument("--n", type=int, default=10)
    p_st.add_argument("--seed", type=int, default=0)
    return parser


def _run(args) -> int:
    from . import experiments as E

    if args.command == "stable":
        params = stable.StableParams(alpha=args.alpha, sigma=args.sigma)
        if args.action == "sample":
            for v in stable.sample_stable(params, args.seed, args.n):
                print(repr(float(v)))
        elif args.action == "cdf":
            print(repr(stable.cdf_stable(params, args.x)))
        else:
            xs = stable.sample_stable(params, args.seed, args.n)
            lo = float(xs.min()) - params.sigma
            hi = float(xs.max()) + params.sigma
            cdf = stable.make_cdf_interpolant(params, lo, hi)
            print(repr(stable.ks_statistic(xs, cdf)))
        return EXIT_OK

    if args.command == "metric-demo":
        n_list = [int(v) for v in args.n_list.replace(",", " ").split()]
        report = E.run_metric_demo(args.which, n_list, args.refinement, args.outdir)
        for row in report["rows"]:
            print(f"n={row['n']}: uniform={row['d_uniform']:.6g} J1={row['d_J1']:.6g} "
                  f"M1={row['d_M1']:.6g} M2={row['d_M2']:.6g} (mesh {row['mesh']:.3g})")
        return EXIT_OK

    cfg = load_config(args.config, _overrides(args))
    if args.command == "table":
        payload = E.run_table(cfg)
        print(f"perimeter={payload['perimeter']!r} alpha={payload['alpha']!r} "
              f"(refinement gap {payload['perimeter_refinement_gap']:.3g})")
    elif args.command == "orbit":
        path = E.run_orbit(cfg, args.nsteps)
        print(path)
    elif args.command == "wip":
        report = E.run_wip_experiment(cfg)
        verdict = report["results"].get("classification")
        print(f"status={report['status']} classification={verdict}")
        for entry in report["results"].get("schedule", []):
            print(f"n={entry['n']}: ks_geo={entry.get('ks_geometric')} "
                  f"diag_M1={entry['diag_M1']:.4g} diag_M2={entry['diag_M2']:.4g} "
                  f"diag_phi={entry['diag_phi']:.4g}")
    elif args.command == "sup-check":
        report = E.run_supremum_check(cfg, args.process)
        for row in report["ks_consecutive"]:
            print(f"KS(sup@{row['n_low']}, sup@{row['n_high']}) = {row['ks']:.4f}")
    elif args.command == "inducing-check":
        payload = E.run_inducing_check(cfg)
        print(f"ks_two_sample={payload['ks_two_sample']:.4f} "
              f"tau_bar_hat={payload['tau_bar_hat']:.4f} "
              f"tail_index_hat={payload['tail_index_hat']:.4f}")
    else:
        raise ConfigError(f"unknown command {args.command!r}")
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _run(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except billiard.GeometryError as e:
        print(f"config error (geometry): {e}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except PartialResultsError as e:
        print(f"partial results: {e} (manifest: {e.manifest_path})", file=sys.stderr)
        return EXIT_PARTIAL
    except (stable.StableNumericsError, observables.ProfileError,
            billiard.BilliardNumericsError) as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
