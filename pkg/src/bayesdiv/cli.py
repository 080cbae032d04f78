"""Command-line front end.

Three subcommands:

* ``estimate``: divergence between two count files, JSON to stdout.
* ``convergence``: repetition ladders of synthetic data, tidy CSV.
* ``nstar``: N*/K convergence scores over a grid of Dirichlet truths.

Exit codes: 0 on success, 2 for input or configuration problems, 3 when
an estimator rejects its input (domain error).
"""

import argparse
import json
import sys

from . import benchmark
from . import estimators as est
from .counts import load_count_files

__all__ = ["main"]

_GENERATORS = ("dirichlet", "markov")
_DIVERGENCES = ("kl", "hellinger2")
_ESTIMATE_CHOICES = benchmark.ESTIMATOR_NAMES


def _ints(text):
    return tuple(int(part) for part in str(text).split(",") if part != "")

def _floats(text):
    return tuple(float(part) for part in str(text).split(",") if part != "")

def _names(text):
    return tuple(part.strip() for part in str(text).split(",") if part.strip())

def _bool(text):
    value = str(text).strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _parse_config_file(path):
    """key=value lines; blank lines and # comments ignored."""
    out = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            key, _, value = line.partition("=")
            out[key.strip().replace("-", "_")] = value.strip()
    return out


# configuration keys shared by convergence and nstar, with coercers for
# values arriving as strings from a config file
_CONFIG_KEYS = {
    "generator": str,
    "k": int,
    "states": int,
    "gram_length": int,
    "alpha": str,
    "beta": str,
    "ladder": _ints,
    "reps": int,
    "estimator": _names,
    "divergence": str,
    "seed": int,
    "out": str,
    "nested_subsample": _bool,
    "parent_size": int,
    "workers": int,
}

_DEFAULTS = {
    "generator": "dirichlet",
    "k": 400,
    "states": 20,
    "gram_length": 2,
    "alpha": "1.0",
    "beta": "1.0",
    "ladder": benchmark.DEFAULT_LADDER,
    "reps": 10,
    "estimator": benchmark.ESTIMATOR_NAMES,
    "divergence": "kl",
    "seed": 0,
    "out": None,
    "nested_subsample": False,
    "parent_size": None,
    "workers": 1,
}


def _merge_settings(args):
    """Defaults, then config file, then explicit flags."""
    merged = dict(_DEFAULTS)
    if getattr(args, "config", None):
        file_values = _parse_config_file(args.config)
        for key, raw in file_values.items():
            if key not in _CONFIG_KEYS:
                raise ValueError(f"unknown config key {key!r}")
            merged[key] = _CONFIG_KEYS[key](raw)
    for key, coerce in _CONFIG_KEYS.items():
        flag_value = getattr(args, key, None)
        if flag_value is not None:
            merged[key] = coerce(flag_value) if isinstance(flag_value, str) else flag_value
    return merged


def _experiment_config(settings, alpha, beta):
    return benchmark.ExperimentConfig(
        generator=settings["generator"],
        K=settings["k"],
        states=settings["states"],
        gram_length=settings["gram_length"],
        alpha_true=alpha,
        beta_true=beta,
        size_ladder=settings["ladder"],
        repetitions=settings["reps"],
        estimators=settings["estimator"],
        divergence=settings["divergence"],
        master_seed=settings["seed"],
        nested_subsample=settings["nested_subsample"],
        parent_size=settings["parent_size"],
        workers=settings["workers"],
    )


def _single(values, flag):
    if len(values) != 1:
        raise ValueError(f"--{flag} takes one value here")
    return values[0]


def cmd_estimate(args):
    try:
        table = load_count_files(args.file1, args.file2, k=args.k)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    name = args.estimator
    divergence = args.divergence
    if name == "zhang" and divergence != "kl":
        print("error: the zhang estimator is defined for KL only", file=sys.stderr)
        return 2
    payload = {"estimator": name, "divergence": divergence}
    try:
        if name == "dpm":
            report = (
                est.estimate_dkl_dpm(table)
                if divergence == "kl"
                else est.estimate_hellinger_dpm(table)
            )
            payload["value"] = report.value
            if report.posterior_std is not None:
                payload["posterior_std"] = report.posterior_std
            payload["diagnostics"] = report.diagnostics
        elif name == "dp":
            report = (
                est.estimate_dkl_dp(table)
                if divergence == "kl"
                else est.estimate_hellinger_dp(table)
            )
            payload["value"] = report.value
            payload["diagnostics"] = report.diagnostics
        elif name == "zhang":
            payload["value"] = est.estimate_dkl_zhang(table)
        else:
            payload["value"] = (
                est.estimate_dkl_plugin(table, name)
                if divergence == "kl"
                else est.estimate_hellinger_plugin(table, name)
            )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    json.dump(payload, sys.stdout, indent=2, sort_keys=True)
    print()
    return 0


def cmd_convergence(args):
    try:
        settings = _merge_settings(args)
        alpha = _single(_floats(settings["alpha"]), "alpha")
        beta = _single(_floats(settings["beta"]), "beta")
        config = _experiment_config(settings, alpha, beta)
        out = settings["out"]
        if not out:
            raise ValueError("--out is required for convergence runs")
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        rows = benchmark.run_convergence(config)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    benchmark.write_rows_csv(rows, out)
    return 0


def cmd_nstar(args):
    try:
        settings = _merge_settings(args)
        alphas = _floats(settings["alpha"])
        betas = _floats(settings["beta"])
        if not alphas or not betas:
            raise ValueError("--alpha and --beta must list at least one value")
        config = _experiment_config(settings, alphas[0], betas[0])
        out = settings["out"]
        if not out:
            raise ValueError("--out is required for nstar runs")
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        entries = benchmark.run_nstar(config, alphas, betas)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    benchmark.write_nstar_csv(entries, out)
    return 0


def _add_experiment_flags(sub):
    sub.add_argument("--config", help="key=value file; flags override it")
    sub.add_argument("--generator", choices=_GENERATORS)
    sub.add_argument("--k", type=int, help="number of categories (dirichlet)")
    sub.add_argument("--states", type=int, help="markov state count")
    sub.add_argument("--gram-length", dest="gram_length", type=int)
    sub.add_argument("--alpha", help="truth concentration(s), comma separated")
    sub.add_argument("--beta", help="truth concentration(s), comma separated")
    sub.add_argument("--ladder", type=_ints, help="sample sizes, comma separated")
    sub.add_argument("--reps", type=int)
    sub.add_argument("--estimator", type=_names, help="comma-separated estimator names")
    sub.add_argument("--divergence", choices=_DIVERGENCES)
    sub.add_argument("--seed", type=int)
    sub.add_argument("--out", help="output CSV path")
    sub.add_argument(
        "--nested-subsample",
        dest="nested_subsample",
        action="store_true",
        default=None,
        help="subsample each ladder size from one parent sample",
    )
    sub.add_argument("--parent-size", dest="parent_size", type=int)
    sub.add_argument("--workers", type=int, help="parallel repetition workers")


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="bayesdiv",
        description="Bayesian divergence estimation between count samples",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p_est = subs.add_parser("estimate", help="estimate divergence from count files")
    p_est.add_argument("file1")
    p_est.add_argument("file2", nargs="?")
    p_est.add_argument("--estimator", default="dpm", choices=_ESTIMATE_CHOICES)
    p_est.add_argument("--divergence", default="kl", choices=_DIVERGENCES)
    p_est.add_argument("--k", type=int, help="number of categories")
    p_est.set_defaults(func=cmd_estimate)

    p_conv = subs.add_parser("convergence", help="run a convergence ladder to CSV")
    _add_experiment_flags(p_conv)
    p_conv.set_defaults(func=cmd_convergence)

    p_nstar = subs.add_parser("nstar", help="N*/K scores over a truth grid")
    _add_experiment_flags(p_nstar)
    p_nstar.set_defaults(func=cmd_nstar)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
