"""Command-line surface.

Verbs:
  symplectic make|check|blocks|factorize|alpha|decompose   matrix analysis
  wdist        compute a metaplectic distribution table
  norm         mixed / modulation norms
  verify       randomized theorem verifiers with JSON reports
  plot         PGM magnitude image of a table

Exit codes: 0 success/verified, 1 verification failed, 2 usage or IO error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import fileio
from .distributions import (
    covariance_check,
    reproducing_check,
    wigner_general,
    wigner_via_normal_form,
)
from .grids import GridSpec, gaussian, random_gaussian_mix
from .matrices import FLOAT, RATIONAL, Matrix
from .norms import (
    MixedNormParams,
    Weight,
    counterexample_swap_ratio,
    dilation_norm_ratio,
    equivalence_check,
    mixed_norm,
    modulation_norm,
)
from .operators import decompose_generators
from .shift_invertible import compose_triple, deformation, factorize, is_shift_invertible
from .symplectic import (
    is_symplectic,
    named_matrix,
    paired_submatrices,
    quarter_blocks,
    stft_matrix,
    tau_wigner_matrix,
)

USAGE_ERROR = 2
VERIFY_FAILED = 1


class CliError(Exception):
    pass


def _weight_from_spec(text):
    if text in (None, "", "one"):
        return None
    if text.startswith("vs:"):
        return Weight.polynomial(float(text[3:]))
    raise CliError(f"unknown weight spec {text!r}; use 'one' or 'vs:SLOPE'")


def _exponent(text):
    val = float(text)
    if val <= 0:
        raise CliError("exponents must be positive (use 'inf' for the sup norm)")
    return val


def _load_matrix(path):
    try:
        return fileio.load_matrix(path)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read matrix {path}: {exc}")


def _load_signal(path):
    try:
        return fileio.load_signal(path)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read signal {path}: {exc}")


# ---------- symplectic verb ----------


def _cmd_symplectic(args):
    if args.action == "make":
        kwargs = {}
        if args.tau is not None:
            kwargs["tau"] = Fraction(args.tau) if args.mode == RATIONAL else float(args.tau)
        for name in ("e", "c", "s"):
            path = getattr(args, name, None)
            if path:
                kwargs[name] = _load_matrix(path)
        m = named_matrix(args.kind, d=args.d, mode=args.mode, **kwargs)
        fileio.save_matrix(args.out, m)
        print(f"wrote {args.out}")
        return 0
    m = _load_matrix(args.matrix)
    if args.action == "check":
        tol = 0.0 if m.mode == RATIONAL else args.tol
        ok = is_symplectic(m, tol=tol)
        inv = is_shift_invertible(m) if ok and m.rows % 4 == 0 else None
        print(f"symplectic: {'true' if ok else 'false'}")
        if inv is not None:
            print(f"shift-invertible: {'true' if inv else 'false'}")
        return 0 if ok else VERIFY_FAILED
    if args.action == "blocks":
        view = quarter_blocks(m)
        payload = {
            f"A{i}{j}": fileio.matrix_to_dict(view.block(i, j))
            for i in range(1, 5)
            for j in range(1, 5)
        }
        sub = paired_submatrices(m)
        payload["E"] = fileio.matrix_to_dict(sub.e)
        payload["F"] = fileio.matrix_to_dict(sub.f)
        payload["Eps"] = fileio.matrix_to_dict(sub.eps)
        payload["Feps"] = fileio.matrix_to_dict(sub.feps)
        print(json.dumps(payload, indent=1))
        return 0
    if args.action == "factorize":
        trip = factorize(m)
        prefix = args.out_prefix
        fileio.save_matrix(f"{prefix}E.json", trip.e)
        fileio.save_matrix(f"{prefix}C.json", trip.c)
        fileio.save_matrix(f"{prefix}S.json", trip.s)
        print(f"wrote {prefix}E.json {prefix}C.json {prefix}S.json")
        return 0
    if args.action == "decompose":
        word = decompose_generators(m.to_numpy())
        out = []
        for fac in word.factors:
            entry = {"kind": fac.kind}
            if fac.mat is not None:
                entry["matrix"] = np.asarray(fac.mat).tolist()
            out.append(entry)
        print(json.dumps({"level": word.d, "factors": out}, indent=1))
        return 0
    raise CliError(f"unknown symplectic action {args.action!r}")


def _cmd_alpha(args):
    e = _load_matrix(args.e)
    c = _load_matrix(args.c)
    s = _load_matrix(args.s)
    a = compose_triple(e, c, s)
    fileio.save_matrix(args.out, a)
    print(f"wrote {args.out}")
    return 0


# ---------- wdist ----------


def _cmd_wdist(args):
    a = _load_matrix(args.matrix)
    f = _load_signal(args.signal)
    g = _load_signal(args.window)
    if args.normal_form:
        trip = factorize(a)
        from .symplectic import block_swap

        chirp_full = trip.c + block_swap(trip.c.rows // 2, trip.c.mode)
        table = wigner_via_normal_form(trip.e, chirp_full, deformation(a), f, g)
    else:
        table = wigner_general(a, f, g)
    fileio.save_tfgrid(args.out, table)
    if args.csv:
        fileio.tfgrid_to_csv(args.csv, table)
    print(f"wrote {args.out}")
    return 0


# ---------- norm ----------


def _cmd_norm(args):
    params = MixedNormParams(
        p=_exponent(args.p), q=_exponent(args.q), weight=_weight_from_spec(args.weight)
    )
    if args.kind == "mixed":
        table = fileio.load_tfgrid(args.tfgrid)
        value = mixed_norm(table, params)
    else:
        f = _load_signal(args.signal)
        g = _load_signal(args.window)
        value = modulation_norm(f, g, params)
    print(f"{value!r}")
    return 0


# ---------- verify ----------


def _verify_moyal(rng, spec):
    worst = 0.0
    mats = [
        stft_matrix(1, FLOAT).to_numpy(),
        tau_wigner_matrix(0.5, 1, FLOAT).to_numpy(),
    ]
    for am in mats:
        for _ in range(5):
            f1 = random_gaussian_mix(spec, rng)
            f2 = random_gaussian_mix(spec, rng)
            g1 = random_gaussian_mix(spec, rng)
            g2 = random_gaussian_mix(spec, rng)
            wa = wigner_general(am, f1, f2)
            wb = wigner_general(am, g1, g2)
            lhs = wa.inner(wb)
            rhs = f1.inner(g1) * np.conj(f2.inner(g2))
            scale = f1.norm() * f2.norm() * g1.norm() * g2.norm()
            worst = max(worst, abs(lhs - rhs) / scale)
    return {
        "theorem": "unitarity (orthogonality relations)",
        "hypothesis": "metaplectic distributions on self-dual grids",
        "trials": 10,
        "min_ratio": None,
        "max_ratio": worst,
        "slope": None,
        "pass": worst <= 1e-3,
    }


def _verify_covariance(rng, spec):
    f = gaussian(spec, center=[0.2], momentum=[0.1])
    g = gaussian(spec)
    h = spec.spacing
    rep_st = covariance_check(stft_matrix(1, FLOAT), np.array([h, 0.0]), f, g)
    rep_tau = covariance_check(
        tau_wigner_matrix(0.5, 1, FLOAT), np.array([2 * h, 2 * h]), f, g
    )
    worst = max(rep_st.modulus_deviation, rep_tau.modulus_deviation)
    return {
        "theorem": "shift covariance of metaplectic distributions",
        "hypothesis": "grid-compatible shifts",
        "trials": 2,
        "min_ratio": None,
        "max_ratio": worst,
        "slope": None,
        "pass": rep_st.modulus_deviation <= 1e-8 and rep_tau.modulus_deviation <= 1e-3,
    }


def _verify_reproducing(rng, spec):
    f = gaussian(spec)
    g = gaussian(spec)
    gamma = gaussian(spec)
    errs = [
        reproducing_check(stft_matrix(1, FLOAT), f, g, gamma),
        reproducing_check(tau_wigner_matrix(0.5, 1, FLOAT), f, g, gamma),
    ]
    worst = max(errs)
    return {
        "theorem": "reproducing formula",
        "hypothesis": "Gaussian f, g, gamma; <gamma, g> != 0",
        "trials": len(errs),
        "min_ratio": None,
        "max_ratio": worst,
        "slope": None,
        "pass": worst <= 1e-2,
    }


def _verify_dilation(rng, spec):
    mats = [
        np.array([[2.0, 0.0], [0.0, 1.0]]),
        np.array([[1.0, 1.0], [0.0, 1.0]]),
        np.array([[1.0, -1.0], [0.0, 2.0]]),
    ]
    params = MixedNormParams(p=1.0, q=2.0)
    reports = [dilation_norm_ratio(s, params, rng, trials=40) for s in mats]
    passed = all(r.passed for r in reports)
    return {
        "theorem": "upper-triangular dilation isomorphism",
        "hypothesis": "S upper block-triangular",
        "trials": sum(r.trials for r in reports),
        "min_ratio": min(r.min_ratio for r in reports),
        "max_ratio": max(r.max_ratio for r in reports),
        "slope": None,
        "pass": passed,
    }


def _verify_equivalence(rng, spec):
    g = gaussian(spec)
    e = Matrix.rational([[1, 1], [0, 1]])
    c = Matrix.zeros(2, 2)
    s = Matrix.rational([[0, 1], [-1, 0]])
    a = compose_triple(e, c, s).to_float()
    params = MixedNormParams(p=1.0, q=2.0)
    rep = equivalence_check(a, g, params, rng, trials=20, spec=spec)
    rep_st = equivalence_check(
        stft_matrix(1, FLOAT), g, MixedNormParams(p=2.0, q=2.0), rng, trials=5, spec=spec
    )
    ok = rep.passed and abs(rep_st.max_ratio - 1.0) <= 1e-6 and abs(rep_st.min_ratio - 1.0) <= 1e-6
    return {
        "theorem": "modulation-space characterization",
        "hypothesis": "shift-invertible, upper-triangular shift block",
        "trials": rep.trials + rep_st.trials,
        "min_ratio": rep.min_ratio,
        "max_ratio": rep.max_ratio,
        "slope": None,
        "pass": ok,
    }


def _verify_counterexample(rng, spec, p=2.0, q=1.0):
    rep = counterexample_swap_ratio(p, q)
    return rep.as_json()


def _jsonable(value):
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def _cmd_verify(args):
    rng = np.random.default_rng(args.seed)
    spec = GridSpec.self_dual(1, args.n)
    runners = {
        "moyal": _verify_moyal,
        "covariance": _verify_covariance,
        "reproducing": _verify_reproducing,
        "dilation": _verify_dilation,
        "equivalence": _verify_equivalence,
    }
    if args.check == "counterexample":
        report = _verify_counterexample(rng, spec, p=_exponent(args.p), q=_exponent(args.q))
    else:
        report = runners[args.check](rng, spec)
    report = {k: _jsonable(v) for k, v in report.items()}
    text = json.dumps(report, indent=1)
    if args.report:
        Path(args.report).write_text(text + "\n")
    print(text)
    return 0 if report["pass"] else VERIFY_FAILED


# ---------- plot ----------


def _cmd_plot(args):
    table = fileio.load_tfgrid(args.infile)
    fileio.write_pgm(args.out, table)
    print(f"wrote {args.out}")
    return 0


# ---------- parser ----------


def build_parser():
    parser = argparse.ArgumentParser(
        prog="metaplectic",
        description="symplectic matrix analysis, metaplectic distributions, mixed norms",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    p_sym = sub.add_parser("symplectic", help="matrix analysis")
    sym_sub = p_sym.add_subparsers(dest="action", required=True)
    p_make = sym_sub.add_parser("make", help="construct a named matrix")
    p_make.add_argument("--kind", required=True)
    p_make.add_argument("--d", type=int, default=1)
    p_make.add_argument("--mode", choices=[RATIONAL, FLOAT], default=RATIONAL)
    p_make.add_argument("--tau", default=None)
    p_make.add_argument("--e", default=None, help="matrix file for dilation blocks")
    p_make.add_argument("--c", default=None, help="matrix file for chirp blocks")
    p_make.add_argument("--s", default=None, help="matrix file for lifts")
    p_make.add_argument("--out", required=True)
    for act in ("check", "blocks", "factorize", "decompose"):
        p_act = sym_sub.add_parser(act)
        p_act.add_argument("matrix")
        if act == "check":
            p_act.add_argument("--tol", type=float, default=1e-12)
        if act == "factorize":
            p_act.add_argument("--out-prefix", default="")
    p_alpha = sym_sub.add_parser("alpha", help="compose a triple back into a matrix")
    p_alpha.add_argument("--e", required=True)
    p_alpha.add_argument("--c", required=True)
    p_alpha.add_argument("--s", required=True)
    p_alpha.add_argument("--out", required=True)

    p_w = sub.add_parser("wdist", help="compute a distribution table")
    p_w.add_argument("--matrix", required=True)
    p_w.add_argument("--signal", required=True)
    p_w.add_argument("--window", required=True)
    p_w.add_argument("--out", required=True)
    p_w.add_argument("--csv", default=None)
    p_w.add_argument("--normal-form", action="store_true")

    p_n = sub.add_parser("norm", help="mixed / modulation norms")
    n_sub = p_n.add_subparsers(dest="kind", required=True)
    p_nm = n_sub.add_parser("mixed")
    p_nm.add_argument("--tfgrid", required=True)
    p_nmod = n_sub.add_parser("modulation")
    p_nmod.add_argument("--signal", required=True)
    p_nmod.add_argument("--window", required=True)
    for pp in (p_nm, p_nmod):
        pp.add_argument("--p", required=True)
        pp.add_argument("--q", required=True)
        pp.add_argument("--weight", default="one")

    p_v = sub.add_parser("verify", help="randomized theorem verifiers")
    p_v.add_argument(
        "check",
        choices=["moyal", "covariance", "reproducing", "dilation", "equivalence", "counterexample"],
    )
    p_v.add_argument("--report", default=None)
    p_v.add_argument("--seed", type=int, default=0)
    p_v.add_argument("--n", type=int, default=32)
    p_v.add_argument("--p", default="2")
    p_v.add_argument("--q", default="1")

    p_plot = sub.add_parser("plot", help="PGM magnitude image")
    p_plot.add_argument("--in", dest="infile", required=True)
    p_plot.add_argument("--out", required=True)
    return parser


_HANDLERS = {
    "wdist": _cmd_wdist,
    "norm": _cmd_norm,
    "verify": _cmd_verify,
    "plot": _cmd_plot,
}


def run(argv):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE_ERROR if exc.code not in (0, None) else 0
    try:
        if args.verb == "symplectic":
            if args.action == "alpha":
                return _cmd_alpha(args)
            return _cmd_symplectic(args)
        return _HANDLERS[args.verb](args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except FileNotFoundError as exc:
        print(f"error: missing file: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return VERIFY_FAILED


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
