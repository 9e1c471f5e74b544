"""Command-line front door: sample generation, density evaluation, spectrum
extraction with analytic overlays, and the verification suite.

Exit codes: 0 success, 1 runtime failure (including a failed verify suite),
2 configuration/input error.  Every run writes a run-info record (version,
seed, resolved parameters) as its first output line so any output file can
be reproduced from its own header.  Outputs carry no timestamps: rerunning a
command with the same seed produces byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from ._version import __version__
from .algebra import AlgebraTag, DivMatrix
from .distributions import (
    BetaIIParams,
    GammaScalarParams,
    MatricTParams,
    MatrixMTParams,
    RngStream,
    ScaleMixtureSpec,
    WishartParams,
    logpdf_beta2_matric,
    logpdf_beta2_multivariate,
    logpdf_matric_t,
    logpdf_matrix_mt,
    sample_beta2_matric,
    sample_elliptical_t,
    sample_gamma_scalar,
    sample_gaussian,
    sample_matric_t,
    sample_matrix_mt,
    sample_wishart,
)
from .errors import DomainError, NotPositiveDefinite, OctonionMatrixError
from .spectral import (
    eigenvalues_batch,
    log_joint_eig_beta2,
    log_joint_eig_mv,
    log_joint_sv_matric_t,
    log_joint_sv_matrix_mt,
    singular_values_batch,
)
from .verify import CheckSpec, default_suite, run_suite

_CONFIG_ERRORS = (
    ValueError, TypeError, KeyError, DomainError, NotPositiveDefinite,
    OctonionMatrixError, json.JSONDecodeError, FileNotFoundError, IsADirectoryError,
)

_SAMPLE_FAMILIES = ("matric-t", "matrix-mt", "wishart", "gamma", "gaussian",
                    "beta2-matric", "elliptical-t")
_DENSITY_FAMILIES = ("matric-t", "matrix-mt", "beta2-matric", "beta2-mv")


class _CliError(Exception):
    """Configuration error carrying the message to print before exit 2."""


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return int(args.seed)
    env = os.environ.get("RDMT_SEED")
    if env is not None:
        return int(env)
    raise _CliError("a seed is required: pass --seed or set RDMT_SEED")


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w"), True


def _run_info(seed, stream, params: dict) -> dict:
    return {
        "record": "run-info",
        "version": __version__,
        "seed": seed,
        "stream": stream,
        "params": params,
    }


def _parse_mix(text: str) -> ScaleMixtureSpec:
    weights, scales = [], []
    for part in text.split(","):
        w, _, s = part.partition(":")
        weights.append(float(w))
        scales.append(float(s))
    return ScaleMixtureSpec(tuple(weights), tuple(scales))


def _build_params(args, family: str):
    """Parameter record from --params JSON (if given) or from flags."""
    if getattr(args, "params", None):
        with open(args.params) as fh:
            obj = json.load(fh)
        loader = {
            "matric-t": MatricTParams,
            "matrix-mt": MatrixMTParams,
            "wishart": WishartParams,
            "gamma": GammaScalarParams,
            "beta2-matric": BetaIIParams,
            "beta2-mv": BetaIIParams,
        }.get(family)
        if loader is None:
            raise _CliError(f"--params is not supported for family {family!r}")
        return loader.from_json_dict(obj)
    if args.beta is None:
        raise _CliError("--beta is required when no --params file is given")
    tag = AlgebraTag(int(args.beta))
    need = {"matric-t": ("m", "n", "nu"), "matrix-mt": ("m", "n", "nu"),
            "wishart": ("m", "nu"), "gamma": ("nu",),
            "gaussian": ("m", "n"), "beta2-matric": ("m", "n", "nu"),
            "beta2-mv": ("m", "n", "nu"), "elliptical-t": ("m", "n", "nu")}[family]
    for flag in need:
        if getattr(args, flag, None) is None:
            raise _CliError(f"--{flag} is required for family {family!r}")
    if family == "matric-t":
        return MatricTParams(tag, args.m, args.n, args.nu)
    if family == "matrix-mt":
        return MatrixMTParams(tag, args.m, args.n, args.nu, args.rho or 1.0)
    if family == "wishart":
        return WishartParams(tag, args.m, args.nu)
    if family == "gamma":
        return GammaScalarParams(tag, args.nu, args.rho or 1.0)
    if family in ("beta2-matric", "beta2-mv"):
        orientation = "gram" if args.n >= args.m else "cogram"
        return BetaIIParams(tag, args.m, args.n, args.nu, orientation)
    if family == "gaussian":
        return ("gaussian", tag, args.m, args.n)
    if family == "elliptical-t":
        mix = _parse_mix(args.mix) if args.mix else ScaleMixtureSpec((1.0,), (1.0,))
        return ("elliptical-t", tag, args.m, args.n, args.nu, mix)
    raise _CliError(f"unknown family {family!r}")


def _sample_raw(rng, family, params, method, count):
    if family == "matric-t":
        return sample_matric_t(rng, params, method or "wishart_root", size=count)
    if family == "matrix-mt":
        return sample_matrix_mt(rng, params, size=count)
    if family == "wishart":
        return sample_wishart(rng, params, method or "bartlett", size=count)
    if family == "beta2-matric":
        return sample_beta2_matric(rng, params, size=count)
    if family == "gaussian":
        _, tag, m, n = params
        return sample_gaussian(rng, tag, m, n, size=count)
    if family == "elliptical-t":
        _, tag, m, n, nu, mix = params
        return sample_elliptical_t(rng, tag, m, n, int(nu), mix, size=count)
    raise _CliError(f"family {family!r} has no sampler")


def _params_dict(family, params, method=None, count=None, fmt=None):
    if isinstance(params, tuple):
        if params[0] == "gaussian":
            d = {"family": "gaussian", "beta": params[1].beta,
                 "m": params[2], "n": params[3]}
        else:
            d = {"family": "elliptical-t", "beta": params[1].beta,
                 "m": params[2], "n": params[3], "nu": params[4],
                 "weights": list(params[5].weights),
                 "scales": list(params[5].scales)}
    else:
        d = params.to_json_dict()
    if method:
        d["method"] = method
    if count is not None:
        d["count"] = count
    if fmt:
        d["format"] = fmt
    return d


def _cmd_sample(args) -> int:
    seed = _resolve_seed(args)
    family = args.dist
    if family not in _SAMPLE_FAMILIES:
        raise _CliError(f"unknown sample family {args.dist!r}")
    params = _build_params(args, family)
    rng = RngStream(seed, args.stream)
    count = int(args.count)
    if count < 1:
        raise _CliError("--count must be positive")
    info = _run_info(seed, args.stream, _params_dict(family, params, args.method,
                                                     count, args.format))
    out, close = _open_out(args.out)
    try:
        if family == "gamma":
            draws = sample_gamma_scalar(rng, params, size=count)
            if args.format == "csv":
                out.write("# " + json.dumps(info, sort_keys=True) + "\n")
                out.write("value\n")
                for v in draws:
                    out.write(f"{v!r}\n")
            else:
                out.write(json.dumps(info, sort_keys=True) + "\n")
                for v in draws:
                    out.write(json.dumps({"value": float(v)}) + "\n")
            return 0
        raw = _sample_raw(rng, family, params, args.method, count)
        tag = AlgebraTag(int(info["params"]["beta"]))
        if args.format == "csv":
            out.write("# " + json.dumps(info, sort_keys=True) + "\n")
            _, m, n, beta = raw.shape
            header = [f"r{i}c{j}k{k}" for i in range(m) for j in range(n)
                      for k in range(beta)]
            out.write(",".join(header) + "\n")
            for row in raw.reshape(count, -1):
                out.write(",".join(repr(float(v)) for v in row) + "\n")
        else:
            out.write(json.dumps(info, sort_keys=True) + "\n")
            for i in range(count):
                mat = DivMatrix(tag, raw[i])
                out.write(json.dumps(mat.to_schema_dict()) + "\n")
        return 0
    finally:
        if close:
            out.close()


def _density_evaluator(args, family, params):
    if family == "matric-t":
        form = args.form or "primal"
        return lambda mat: logpdf_matric_t(params, mat, form)
    if family == "matrix-mt":
        return lambda mat: logpdf_matrix_mt(params, mat)
    if family == "beta2-matric":
        return lambda mat: logpdf_beta2_matric(params, mat)
    if family == "beta2-mv":
        return lambda mat: logpdf_beta2_multivariate(params, mat)
    raise _CliError(f"unknown density family {family!r}")


def _cmd_density(args) -> int:
    family = args.dist
    if family not in _DENSITY_FAMILIES:
        raise _CliError(f"unknown density family {args.dist!r}")
    params = _build_params(args, family)
    evaluator = _density_evaluator(args, family, params)
    info = _run_info(None, None, _params_dict(family, params))
    if args.form:
        info["params"]["form"] = args.form
    if args.points == "-":
        lines = sys.stdin.read().splitlines()
    else:
        with open(args.points) as fh:
            lines = fh.read().splitlines()
    values = []
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line:
            continue
        obj = json.loads(line)
        if isinstance(obj, dict) and obj.get("record") == "run-info":
            continue
        mat = DivMatrix.from_schema_dict(obj)
        values.append(evaluator(mat))
    out, close = _open_out(args.out)
    try:
        out.write("# " + json.dumps(info, sort_keys=True) + "\n")
        for v in values:
            out.write(f"{v!r}\n")
        return 0
    finally:
        if close:
            out.close()


_SPECTRUM_OVERLAYS = {
    ("matric-t", "singular"): log_joint_sv_matric_t,
    ("matric-t", "eigen"): log_joint_eig_beta2,
    ("elliptical-t", "singular"): log_joint_sv_matric_t,
    ("matrix-mt", "singular"): log_joint_sv_matrix_mt,
    ("matrix-mt", "eigen"): log_joint_eig_mv,
    ("beta2-matric", "eigen"): log_joint_eig_beta2,
}


def _spectrum_values(family, kind, tag, raw):
    if kind == "singular":
        if family in ("wishart", "beta2-matric"):
            raise _CliError(f"{family} samples are Hermitian; use --kind eigen")
        return singular_values_batch(tag, raw)
    if family in ("matric-t", "matrix-mt", "elliptical-t"):
        if raw.shape[1] > raw.shape[2]:
            raise _CliError("eigen spectra of T T* need m <= n; "
                            "use --kind singular for tall matrices")
        from .algebra import _conj_t_raw, _hermitize_raw, _matmul_raw

        gram = _hermitize_raw(_matmul_raw(raw, _conj_t_raw(raw)))
        return eigenvalues_batch(tag, gram)
    return eigenvalues_batch(tag, raw)


def _cmd_spectrum(args) -> int:
    seed = _resolve_seed(args)
    family = args.dist
    if family not in _SAMPLE_FAMILIES or family == "gamma":
        raise _CliError(f"unknown spectrum family {args.dist!r}")
    if args.params:
        raise _CliError("spectrum works on the standard families; use flags, "
                        "not --params")
    params = _build_params(args, family)
    rng = RngStream(seed, args.stream)
    count = int(args.count)
    kind = args.kind or ("eigen" if family in ("wishart", "beta2-matric")
                         else "singular")
    raw = _sample_raw(rng, family, params, args.method, count)
    tag = AlgebraTag(int(_params_dict(family, params)["beta"]))
    vals = _spectrum_values(family, kind, tag, raw)
    info = _run_info(seed, args.stream, _params_dict(family, params, args.method,
                                                     count))
    info["params"]["kind"] = kind
    out, close = _open_out(args.out)
    try:
        out.write("# " + json.dumps(info, sort_keys=True) + "\n")
        m = vals.shape[1]
        out.write(",".join(f"v{i + 1}" for i in range(m)) + "\n")
        for row in vals:
            out.write(",".join(repr(float(v)) for v in row) + "\n")
    finally:
        if close:
            out.close()
    if args.grid:
        _write_grid(args, family, kind, vals, info)
    return 0


def _write_grid(args, family, kind, vals, info) -> None:
    overlay = _SPECTRUM_OVERLAYS.get((family, kind))
    if overlay is None:
        raise _CliError(f"no analytic overlay for {family}/{kind}")
    m = vals.shape[1]
    if m > 2:
        raise _CliError("analytic grids are emitted for m <= 2 only")
    tag = AlgebraTag(int(info["params"]["beta"]))
    n, nu = int(info["params"]["n"]), float(info["params"]["nu"])
    if family == "beta2-matric" and n < int(info["params"]["m"]):
        # cogram orientation: the spectrum follows the dimension-swapped law
        m_par = int(info["params"]["m"])
        n, nu = m_par, nu + n - m_par
    lo = float(np.quantile(vals, 0.001))
    hi = float(np.quantile(vals, 0.999))
    lo = max(lo * 0.5, 1e-6)
    with open(args.grid, "w") as fh:
        fh.write("# " + json.dumps(info, sort_keys=True) + "\n")
        if m == 1:
            fh.write("v1,logpdf\n")
            for x in np.linspace(lo, hi, 256):
                x = float(x)
                fh.write(f"{x!r},{overlay(tag, m, n, nu, [x])!r}\n")
        else:
            fh.write("v1,v2,logpdf\n")
            grid = np.linspace(lo, hi, 64)
            for x1 in grid:
                for x2 in grid:
                    if x2 >= x1:
                        continue
                    x1f, x2f = float(x1), float(x2)
                    fh.write(f"{x1f!r},{x2f!r},"
                             f"{overlay(tag, m, n, nu, [x1f, x2f])!r}\n")


def _cmd_verify(args) -> int:
    seed = _resolve_seed(args)
    if args.suite in (None, "default"):
        suite = default_suite()
    else:
        with open(args.suite) as fh:
            suite = [CheckSpec.from_json_dict(o) for o in json.load(fh)]
    rng = RngStream(seed, args.stream)
    info = _run_info(seed, args.stream, {"suite": args.suite or "default",
                                         "checks": len(suite)})
    print(json.dumps(info, sort_keys=True))

    def progress(result):
        flag = "PASS" if result.passed else "FAIL"
        print(f"{flag} {result.name}: statistic={result.statistic:.6g} "
              f"threshold={result.threshold:g} attempts={result.attempts} "
              f"({result.wall_time_s:.2f}s)")

    report = run_suite(suite, rng, progress=progress)
    print(f"overall: {'PASS' if report.overall_pass else 'FAIL'} "
          f"({len(report.checks)} checks, {report.total_wall_time_s:.1f}s)")
    if args.report:
        report.write(args.report)
    return 0 if report.overall_pass else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rdmt",
        description="Matricvariate / matrix multivariate T and beta II "
                    "distributions over the real normed division algebras.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, with_seed=True):
        p.add_argument("--beta", type=int, choices=[1, 2, 4, 8])
        p.add_argument("--m", type=int)
        p.add_argument("--n", type=int)
        p.add_argument("--nu", type=float)
        p.add_argument("--rho", type=float)
        p.add_argument("--params", help="JSON parameter file (overrides flags)")
        p.add_argument("--out", help="output path (default stdout)")
        if with_seed:
            p.add_argument("--seed", type=int,
                           help="RNG seed (falls back to RDMT_SEED)")
            p.add_argument("--stream", type=int, default=0)

    p_sample = sub.add_parser("sample", help="draw and write samples")
    common(p_sample)
    p_sample.add_argument("--dist", required=True)
    p_sample.add_argument("--count", type=int, required=True)
    p_sample.add_argument("--method",
                          choices=["wishart_root", "inverse_root", "bartlett", "gram"])
    p_sample.add_argument("--format", choices=["jsonl", "csv"], default="jsonl")
    p_sample.add_argument("--mix", help="elliptical mixture 'w:s,w:s,...'")

    p_density = sub.add_parser("density", help="evaluate log densities at points")
    common(p_density, with_seed=False)
    p_density.add_argument("--dist", required=True)
    p_density.add_argument("--points", required=True,
                           help="JSONL file of matrices ('-' for stdin)")
    p_density.add_argument("--form", choices=["primal", "dual"])

    p_spectrum = sub.add_parser("spectrum",
                                help="sample and extract sorted spectra (CSV)")
    common(p_spectrum)
    p_spectrum.add_argument("--dist", required=True)
    p_spectrum.add_argument("--count", type=int, required=True)
    p_spectrum.add_argument("--kind", choices=["singular", "eigen"])
    p_spectrum.add_argument("--method",
                            choices=["wishart_root", "inverse_root",
                                     "bartlett", "gram"])
    p_spectrum.add_argument("--mix", help="elliptical mixture 'w:s,w:s,...'")
    p_spectrum.add_argument("--grid", help="also write an analytic log-density grid")

    p_verify = sub.add_parser("verify", help="run the verification suite")
    p_verify.add_argument("--suite", help="'default' or a JSON CheckSpec list")
    p_verify.add_argument("--seed", type=int)
    p_verify.add_argument("--stream", type=int, default=0)
    p_verify.add_argument("--report", help="write the JSON report here")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    commands = {
        "sample": _cmd_sample,
        "density": _cmd_density,
        "spectrum": _cmd_spectrum,
        "verify": _cmd_verify,
    }
    try:
        return commands[args.subcommand](args)
    except _CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except _CONFIG_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # genuine runtime failure
        print(f"runtime error: {exc!r}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
