"""Command-line interface.

Subcommands: verify, generate, kstar, mesh-average, sample.  Exit codes:
0 success (and verified designs pass), 1 a verification ran cleanly and
failed, 2 input or usage errors.  All randomized commands require an
explicit --seed; outputs are deterministic given identical arguments.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import serialize
from .channels import (
    average_choi,
    design_distance,
    qubit_channel_design,
    unistochastic_design_distance,
    unistochastic_design_qubit,
)
from .envdim import fit_dataset
from .projective import (
    is_projective_design,
    mub_family,
    sic_fiducial_d2,
    sic_fiducial_d3,
    states_of_bases,
    welch_bound,
    welch_sum,
    wh_orbit,
)
from .simplex import generalized_simpson, mesh_average, simplex_design_residual
from .unitary import UnitarySet, clifford_group, pauli_group, unitary_design_bound, unitary_design_sum

PASS, FAIL, USAGE_ERROR = 0, 1, 2


def _fail_usage(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return USAGE_ERROR


def cmd_verify(args) -> int:
    tol = args.tol
    try:
        if args.kind == "projective":
            sset = serialize.load_json(args.input, "state_set")
            total = welch_sum(sset, args.t)
            bound = welch_bound(sset.dim, sset.total_weight, args.t)
            residual = total - bound
            ok = is_projective_design(sset, args.t, tol)
        elif args.kind == "unitary":
            uset = serialize.load_json(args.input, "unitary_set")
            total = unitary_design_sum(uset, args.t)
            bound = unitary_design_bound(uset.dim, uset.total_weight, args.t)
            residual = total - bound
            ok = residual <= tol * bound
        elif args.kind == "simplex":
            design = serialize.load_json(args.input, "simplex_design")
            residual = simplex_design_residual(design, args.t)
            bound = 0.0
            ok = residual <= tol
        elif args.kind == "channel":
            cset = serialize.load_json(args.input, "channel_set")
            if args.k is None:
                return _fail_usage("verify channel needs --k (environment dimension)")
            residual = design_distance(cset, cset.dim, args.k, args.t)
            bound = 0.0
            ok = residual <= tol
        else:  # unistochastic
            cset = serialize.load_json(args.input, "channel_set")
            residual = unistochastic_design_distance(cset, cset.dim, args.t)
            bound = 0.0
            ok = residual <= tol
    except (OSError, ValueError, KeyError, TypeError) as exc:
        return _fail_usage(str(exc))
    print(f"kind: {args.kind}  t: {args.t}")
    print(f"residual: {residual:.6e}")
    print(f"bound: {bound:.6e}")
    print(f"verdict: {'PASS' if ok else 'FAIL'} (tol {tol:g})")
    return PASS if ok else FAIL


def cmd_generate(args) -> int:
    try:
        if args.object == "clifford":
            value = clifford_group(args.n)
        elif args.object == "pauli":
            group = pauli_group(args.n)
            value = UnitarySet(group.dim, group.elements, group.weights)
        elif args.object == "mub":
            value = states_of_bases(mub_family(args.d))
        elif args.object == "sic":
            if args.d == 2:
                value = wh_orbit(sic_fiducial_d2())
            elif args.d == 3:
                value = wh_orbit(sic_fiducial_d3(args.theta))
            else:
                return _fail_usage("sic generation supports --d 2 or 3")
        elif args.object == "simpson":
            value = generalized_simpson(args.d)
        elif args.object == "channel-design":
            value = qubit_channel_design(args.k)
            print(f"channels: {len(value)}  signed_weights: {value.has_signed_weights}")
        else:  # unistochastic-design
            value = unistochastic_design_qubit()
        serialize.save_json(value, args.output)
    except (OSError, ValueError) as exc:
        return _fail_usage(str(exc))
    print(f"wrote {args.output}")
    return PASS


def cmd_kstar(args) -> int:
    try:
        dataset = serialize.counts_from_csv(args.counts, shots=args.shots)
        fits = fit_dataset(dataset, args.model)
        serialize.fits_to_csv(fits, args.output)
    except (OSError, ValueError) as exc:
        return _fail_usage(str(exc))
    print(f"wrote {args.output}")
    for delay, fit in fits:
        extra = "" if fit.w is None else f"  w: {fit.w:.6f}"
        print(f"delay {delay:g}: k* = {fit.k_star:.6f}  "
              f"epsilon* = {fit.epsilon_star:.6e}{extra}")
    if not args.no_plot:
        from .plots import render_fit_figure

        base = args.output.rsplit(".", 1)[0]
        print(f"wrote {render_fit_figure(fits, base + '.png')}")
    return PASS


def cmd_mesh_average(args) -> int:
    try:
        tri = serialize.load_json(args.mesh, "triangulation")
        with open(args.function) as fh:
            f, degree = serialize.polynomial_from_json(json.load(fh))
        design = (serialize.load_json(args.design, "simplex_design")
                  if args.design else None)
        value = mesh_average(tri, f, design)
    except (OSError, ValueError, KeyError) as exc:
        return _fail_usage(str(exc))
    strength = 2  # generalized Simpson default
    if degree > strength:
        print(f"warning: polynomial degree {degree} exceeds design strength "
              f"{strength}; exactness is not guaranteed", file=sys.stderr)
    print(f"average: {value!r}")
    return PASS


def cmd_sample(args) -> int:
    from .random_channels import empirical_tcopy_mean, make_rng, max_z_score

    try:
        rng = make_rng(args.seed)
        mean, se_re, se_im = empirical_tcopy_mean(
            args.construction, args.d, args.param, args.t, args.n, rng)
    except (ValueError, FloatingPointError) as exc:
        return _fail_usage(str(exc))
    report = {
        "construction": args.construction,
        "d": args.d,
        "param": args.param,
        "t": args.t,
        "samples": args.n,
        "seed": args.seed,
        "mean": serialize.matrix_to_json(mean),
    }
    # Analytic reference: Stinespring sampling realizes the [t, param]
    # average for any param; the other constructions match it at the flat
    # measure s = d^2.
    if args.construction == "stinespring" or args.param == args.d**2:
        reference = average_choi(args.d, args.param if args.construction == "stinespring"
                                 else args.d**2, args.t)
        z = max_z_score(mean, se_re, se_im, reference.matrix)
        report["analytic"] = serialize.matrix_to_json(reference.matrix)
        report["max_z"] = z
        print(f"max |z| vs analytic average: {z:.3f}")
    try:
        with open(args.output, "w") as fh:
            fh.write(serialize.dumps_canonical(report))
    except OSError as exc:
        return _fail_usage(str(exc))
    print(f"wrote {args.output}")
    return PASS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qdesigns",
        description="Construct and verify quantum averaging sets (designs).")
    parser.add_argument("--threads", type=int, default=1,
                        help="reserved worker count; computations are "
                             "vectorized and run single-threaded (default 1)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="check a serialized design")
    p.add_argument("--kind", required=True,
                   choices=["projective", "unitary", "simplex", "channel", "unistochastic"])
    p.add_argument("--input", required=True)
    p.add_argument("-t", type=int, required=True, help="design strength")
    p.add_argument("--k", type=float, help="environment dimension (channel kind)")
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("generate", help="write a canonical design artifact")
    p.add_argument("--object", required=True,
                   choices=["clifford", "pauli", "mub", "sic", "simpson",
                            "channel-design", "unistochastic-design"])
    p.add_argument("--n", type=int, default=1, help="qubit count (group objects)")
    p.add_argument("--d", type=int, default=3, help="dimension / outcome count")
    p.add_argument("--k", type=float, default=2.0, help="environment dimension")
    p.add_argument("--theta", type=float, default=0.0, help="SIC fiducial parameter (d=3)")
    p.add_argument("--output", "-o", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("kstar", help="fit effective environment dimension per delay")
    p.add_argument("--counts", required=True, help="counts CSV")
    p.add_argument("--model", choices=["uniform", "emission"], default="uniform")
    p.add_argument("--shots", type=int, help="override the per-circuit shot count")
    p.add_argument("--output", "-o", required=True, help="fit CSV path")
    p.add_argument("--no-plot", action="store_true",
                   help="skip rendering the companion figure")
    p.set_defaults(func=cmd_kstar)

    p = sub.add_parser("mesh-average", help="average a polynomial over a mesh")
    p.add_argument("--mesh", required=True, help="triangulation JSON")
    p.add_argument("--function", required=True,
                   help='polynomial JSON {"terms": [[[exponents], coeff], ...]}')
    p.add_argument("--design", help="simplex design JSON (default: generalized Simpson)")
    p.set_defaults(func=cmd_mesh_average)

    p = sub.add_parser("sample", help="Monte-Carlo mean of t-copy Choi states")
    p.add_argument("--construction", required=True,
                   choices=["kraus", "choi", "stinespring"])
    p.add_argument("--d", type=int, default=2, help="system dimension")
    p.add_argument("--param", type=int, required=True,
                   help="construction parameter (s or M)")
    p.add_argument("-t", type=int, default=2, help="copy count")
    p.add_argument("--n", type=int, required=True, help="sample count")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--output", "-o", required=True)
    p.set_defaults(func=cmd_sample)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
