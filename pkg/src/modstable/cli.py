"""Command-line front end.

Subcommands: bound, cdf, sample, cumulants, markov, verify, report-plot.
Exit codes: 0 success / all bounds pass, 1 runtime error, 2 verification
failure, 64 usage error.  Output is deterministic for fixed (argv, seed).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import numpy as np

from . import empirics, markov, models, zone_control
from .cumulants import CumulantBoundParams, check_uniform_bounds
from .stable_laws import StableLaw, cdf as stable_cdf, density as stable_density

USAGE_ERROR = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_ERROR)


def _float_list(text: str) -> list[float]:
    return [float(part) for part in text.split(",") if part.strip()]


def _load_chain(path: str):
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    m = int(data["states"])
    raw = data["P"]
    if raw and isinstance(raw[0], list):
        rows = raw
    else:
        rows = [raw[i * m:(i + 1) * m] for i in range(m)]
    exact = [[Fraction(x).limit_denominator(10**12) for x in row] for row in rows]
    ok = all(abs(float(f) - float(x)) < 1e-12 for row, erow in zip(rows, exact)
             for x, f in zip(row, erow))
    spec = markov.make_chain(exact if ok and all(sum(r) == 1 for r in exact) else rows)
    f = data.get("f")
    return spec, f


def _parse_f(text: str, m: int):
    vals = [Fraction(v) if "/" in v else Fraction(v).limit_denominator(10**9)
            for v in text.split(",")]
    if len(vals) != m:
        raise ValueError(f"f needs {m} values, got {len(vals)}")
    return vals


def build_parser() -> _Parser:
    parser = _Parser(prog="modstable", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_bound = sub.add_parser("bound", help="Kolmogorov constant from a zone of control")
    p_bound.add_argument("--alpha", type=float, required=True)
    p_bound.add_argument("--c", type=float, required=True)
    p_bound.add_argument("--beta", type=float, default=0.0)
    p_bound.add_argument("--v", type=float, required=True)
    p_bound.add_argument("--K", type=float, required=True)
    p_bound.add_argument("--K1", type=float, required=True)

    p_cdf = sub.add_parser("cdf", help="stable CDF/density by CF inversion")
    p_cdf.add_argument("--alpha", type=float, required=True)
    p_cdf.add_argument("--c", type=float, required=True)
    p_cdf.add_argument("--beta", type=float, default=0.0)
    p_cdf.add_argument("--x", type=_float_list, required=True)
    p_cdf.add_argument("--tol", type=float, default=1e-9)
    p_cdf.add_argument("--density", action="store_true")

    p_sample = sub.add_parser("sample", help="draw model samples, one per line")
    p_sample.add_argument("--model", required=True, choices=models.MODEL_KINDS)
    p_sample.add_argument("--params", default="{}")
    p_sample.add_argument("--n", type=float, required=True)
    p_sample.add_argument("--count", type=int, required=True)
    p_sample.add_argument("--seed", type=int, required=True)

    p_cum = sub.add_parser("cumulants", help="exact chain cumulants vs their bound, CSV")
    p_cum.add_argument("--chain", required=True)
    p_cum.add_argument("--f", required=True)
    p_cum.add_argument("--n", type=int, required=True)
    p_cum.add_argument("--r-max", type=int, default=5)

    p_markov = sub.add_parser("markov", help="chain diagnostics: theta, Sigma^2, bounds")
    p_markov.add_argument("--chain", required=True)
    p_markov.add_argument("--f", default=None)

    for name in ("verify", "report-plot"):
        p = sub.add_parser(name)
        p.add_argument("--model", required=True, choices=models.MODEL_KINDS)
        p.add_argument("--params", default="{}")
        p.add_argument("--sizes", type=_float_list, required=True)
        p.add_argument("--seed", type=int, required=True)
        p.add_argument("--budget", type=int, default=200_000)
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", default=None)
    return parser


def _cmd_bound(args) -> int:
    law = StableLaw(c=args.c, alpha=args.alpha, beta=args.beta)
    c_opt, lam = zone_control.kolmogorov_constant(law, args.v, args.K, args.K1)
    c3 = zone_control.simplified_constant(law, args.v, args.K, args.K1)
    print(json.dumps({
        "alpha": args.alpha, "c": args.c, "v": args.v, "K": args.K, "K1": args.K1,
        "lambda_star": lam, "C": c_opt, "C3": c3,
    }, indent=2))
    return 0


def _cmd_cdf(args) -> int:
    law = StableLaw(c=args.c, alpha=args.alpha, beta=args.beta)
    out = {"x": args.x, "cdf": [stable_cdf(law, x, args.tol) for x in args.x]}
    if args.density:
        out["density"] = [stable_density(law, x, args.tol) for x in args.x]
    print(json.dumps(out, indent=2))
    return 0


def _cmd_sample(args) -> int:
    model = models.make_model(args.model, json.loads(args.params))
    for v in models.model_sample(model, args.n, args.count, args.seed):
        print(repr(float(v)))
    return 0


def _cmd_cumulants(args) -> int:
    spec, f_default = _load_chain(args.chain)
    f = _parse_f(args.f, spec.n_states) if args.f else f_default
    kappas = _chain_cumulants(spec, f, args.n, args.r_max)
    k = max(abs(float(v)) for v in f)
    d = (1.0 + spec.theta) / (1.0 - spec.theta)
    params = CumulantBoundParams(D=d / 2.0, N=float(args.n),
                                 A=k * np.sqrt(spec.n_states), var_s=float(kappas[2]))
    rows = check_uniform_bounds({r: float(v) for r, v in kappas.items()}, params, args.r_max)
    print("r,kappa,bound,pass")
    for row in rows:
        print(f"{row.r},{row.kappa!r},{row.bound!r},{'true' if row.ok else 'false'}")
    return 0


def _chain_cumulants(spec, f, n: int, r_max: int) -> dict:
    """Exact cumulants of S_n = sum_{t=1}^n f(X_t) from a moment recursion."""
    from .markov import chain_sum_cumulants

    return chain_sum_cumulants(spec, f, n, r_max)


def _cmd_markov(args) -> int:
    spec, f_default = _load_chain(args.chain)
    f = _parse_f(args.f, spec.n_states) if args.f else f_default
    out = {"states": spec.n_states, "theta": spec.theta}
    if f is not None:
        sigma2 = markov.asymptotic_variance(spec, f)
        positive = markov.cycle_criterion(spec, f)
        out["Sigma2"] = float(sigma2)
        out["Sigma2_positive"] = positive
        k = max(abs(float(v)) for v in f)
        out["bounds"] = {
            "cumulant_route_coeff": markov.markov_kol_bound(
                1, max(float(sigma2), 1e-300), k, spec.n_states, spec.theta)
            if positive else None,
            "linear_functional_coeff": markov.markov_kol_bound_linear(
                1, float(sigma2), k, spec.n_states, spec.theta) if positive else None,
        }
    print(json.dumps(out, indent=2))
    return 0


def _cmd_verify(args, plot: bool = False) -> int:
    model = models.make_model(args.model, json.loads(args.params))
    rows = empirics.verify_model(model, args.sizes, args.seed, budget=args.budget)
    if plot:
        lines = ["size,bound,dkol"]
        lines += [f"{r.size!r},{r.bound!r},{r.dkol.value!r}" for r in rows]
        text = "\n".join(lines) + "\n"
    else:
        text = empirics.render_report(rows, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if all(r.passed for r in rows) else 2


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "bound": _cmd_bound,
        "cdf": _cmd_cdf,
        "sample": _cmd_sample,
        "cumulants": _cmd_cumulants,
        "markov": _cmd_markov,
        "verify": _cmd_verify,
        "report-plot": lambda a: _cmd_verify(a, plot=True),
    }
    try:
        return handlers[args.command](args)
    except SystemExit:
        raise
    except (ValueError, models.BadParams, FileNotFoundError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
