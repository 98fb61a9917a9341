"""Command-line front end.

Subcommands: er, posterior, entropy, capacity, sweep, oracle-check.
States and noise matrices are given either as one-mode flags or as JSON
files; a JSON config file can stand in for any flag (explicit flags win).
Machine-readable artifacts (JSON, CSV) always carry nats; --bits converts
printed summaries only.

Exit codes: 0 success, 1 validation failure (a named invariant is
violated), 2 I/O or usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from .errors import QHomodyneError
from .gaussian import CovarianceMatrix, entropy, require_valid, symplectic_eigenvalues
from .measurement import NoiseMatrix, as_noise, posterior
from .er import entropy_reduction
from .capacity import EnergyForm, cea_multimode, cea_one_mode, sweep
from .oracle import DEFAULT_N, DEFAULT_NODES, run_verification

LN2 = math.log(2.0)

_DEFAULTS = {
    "er": {"bits": False, "format": "text"},
    "posterior": {"format": "text"},
    "entropy": {"bits": False, "format": "text"},
    "capacity": {"bits": False, "format": "text"},
    "sweep": {
        "betas": "0,1,5,10",
        "e_min": 0.5,
        "e_max": 6.0,
        "steps": 56,
        "format": "csv",
    },
    "oracle-check": {
        "n": DEFAULT_N,
        "nodes": DEFAULT_NODES,
        "seed": 20260814,
        "mixtures": 5,
    },
}


class _UsageError(Exception):
    """Missing or inconsistent inputs: exit code 2."""


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qhomodyne",
        description="Information-theoretic quantities of Gaussian approximate "
        "position measurements (noisy homodyning).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="JSON file supplying any of this command's flags")
        p.add_argument("--output", help="write the artifact to this path instead of stdout")
        p.add_argument("--format", choices=("text", "json", "csv"), default=None)
        p.add_argument("--bits", action="store_true", default=None,
                       help="print entropic values in bits (artifacts stay in nats)")

    def add_state(p):
        p.add_argument("--state", help="JSON file with covariance blocks")
        p.add_argument("--alpha-qq", type=float, default=None)
        p.add_argument("--alpha-qp", type=float, default=None)
        p.add_argument("--alpha-pp", type=float, default=None)

    def add_noise(p):
        p.add_argument("--beta", type=float, default=None,
                       help="scalar noise b, expanded to b times the identity")
        p.add_argument("--beta-file", help="JSON file with a full noise matrix")

    p = sub.add_parser("er", help="entropy reduction of the measurement on a state")
    add_common(p); add_state(p); add_noise(p)

    p = sub.add_parser("posterior", help="posterior covariance and gain matrices")
    add_common(p); add_state(p); add_noise(p)

    p = sub.add_parser("entropy", help="von Neumann entropy of a Gaussian state")
    add_common(p); add_state(p)

    p = sub.add_parser("capacity", help="energy-constrained entanglement-assisted capacity")
    add_common(p); add_noise(p)
    p.add_argument("--energy", type=float, default=None, help="energy budget E")
    p.add_argument("--eps-qq", help="JSON file with the q-block of the Hamiltonian")
    p.add_argument("--eps-pp", help="JSON file with the p-block of the Hamiltonian")
    p.add_argument("--restarts", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)

    p = sub.add_parser("sweep", help="capacity table over a (beta, E) grid")
    add_common(p)
    p.add_argument("--betas", default=None, help="comma-separated noise levels")
    p.add_argument("--e-min", type=float, default=None)
    p.add_argument("--e-max", type=float, default=None)
    p.add_argument("--steps", type=int, default=None)

    p = sub.add_parser("oracle-check", help="run the oracle verification suite")
    add_common(p)
    p.add_argument("--n", type=int, default=None, help="kernel grid points")
    p.add_argument("--nodes", type=int, default=None, help="outcome quadrature nodes")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--mixtures", type=int, default=None)

    return parser


def _read_json_file(path: str):
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def _apply_config_and_defaults(args: argparse.Namespace) -> argparse.Namespace:
    """Resolve each flag as: explicit value, else config value, else default."""
    config = {}
    if getattr(args, "config", None):
        config = _read_json_file(args.config)
        if not isinstance(config, dict):
            raise _UsageError(f"config file {args.config} must hold a JSON object")
    merged = dict(_DEFAULTS.get(args.command, {}))
    for key, value in config.items():
        dest = key.replace("-", "_")
        if not hasattr(args, dest) or dest in ("command", "config"):
            raise _UsageError(f"config key {key!r} is not a flag of {args.command!r}")
        merged[dest] = value
    for dest, value in merged.items():
        if getattr(args, dest, None) is None:
            setattr(args, dest, value)
    return args


def _state_from(args) -> CovarianceMatrix:
    if args.state:
        alpha = CovarianceMatrix.from_json(_read_json_file(args.state))
    elif args.alpha_qq is not None and args.alpha_pp is not None:
        alpha = CovarianceMatrix.one_mode(
            args.alpha_qq, args.alpha_qp or 0.0, args.alpha_pp
        )
    else:
        raise _UsageError("provide --state or --alpha-qq/--alpha-pp (and optional --alpha-qp)")
    require_valid(alpha)
    return alpha


def _noise_from(args, s: int) -> NoiseMatrix:
    if args.beta_file:
        return NoiseMatrix.from_json(_read_json_file(args.beta_file))
    if args.beta is None:
        raise _UsageError("provide --beta or --beta-file")
    return as_noise(args.beta, s)


def _emit(args, text: str) -> None:
    if args.output:
        with open(args.output, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _unit(args) -> tuple[float, str]:
    if getattr(args, "bits", False):
        return LN2, "bits"
    return 1.0, "nats"


def _fmt_matrix(m: np.ndarray) -> str:
    return np.array2string(np.asarray(m), precision=9, suppress_small=False)


def cmd_er(args) -> int:
    alpha = _state_from(args)
    noise = _noise_from(args, alpha.s)
    result = entropy_reduction(alpha, noise)
    if args.format == "json":
        _emit(args, json.dumps(result.to_json(), indent=2) + "\n")
    else:
        div, unit = _unit(args)
        _emit(
            args,
            f"entropy reduction: {result.value / div:.6f} {unit}\n"
            f"prior entropy:     {result.prior_entropy / div:.6f} {unit}\n"
            f"posterior entropy: {result.posterior_entropy / div:.6f} {unit}\n",
        )
    return 0


def cmd_posterior(args) -> int:
    alpha = _state_from(args)
    noise = _noise_from(args, alpha.s)
    model = posterior(alpha, noise)
    if args.format == "json":
        _emit(args, json.dumps(model.to_json(), indent=2) + "\n")
    else:
        hat = model.alpha_hat
        _emit(
            args,
            "posterior alpha_qq:\n" + _fmt_matrix(hat.alpha_qq) + "\n"
            "posterior alpha_qp:\n" + _fmt_matrix(hat.alpha_qp) + "\n"
            "posterior alpha_pp:\n" + _fmt_matrix(hat.alpha_pp) + "\n"
            "K_q:\n" + _fmt_matrix(model.K_q) + "\n"
            "K_p:\n" + _fmt_matrix(model.K_p) + "\n",
        )
    return 0


def cmd_entropy(args) -> int:
    alpha = _state_from(args)
    value = entropy(alpha)
    nu = symplectic_eigenvalues(alpha)
    if args.format == "json":
        _emit(args, json.dumps({"entropy_nats": value, "nu": nu.tolist()}, indent=2) + "\n")
    else:
        div, unit = _unit(args)
        _emit(
            args,
            f"entropy: {value / div:.6f} {unit}\n"
            "symplectic eigenvalues: " + ", ".join(f"{v:.9g}" for v in nu) + "\n",
        )
    return 0


def cmd_capacity(args) -> int:
    if args.energy is None:
        raise _UsageError("provide --energy")
    if args.eps_qq or args.eps_pp:
        if not (args.eps_qq and args.eps_pp):
            raise _UsageError("provide both --eps-qq and --eps-pp, or neither")
        eps_qq = np.asarray(_read_json_file(args.eps_qq), dtype=float)
        eps_pp = np.asarray(_read_json_file(args.eps_pp), dtype=float)
        h = EnergyForm(eps_qq, eps_pp, args.energy)
        noise = _noise_from(args, h.s)
        kwargs = {}
        if args.restarts is not None:
            kwargs["restarts"] = args.restarts
        if args.seed is not None:
            kwargs["seed"] = args.seed
        result = cea_multimode(noise, h, **kwargs)
    elif args.beta_file:
        beta = NoiseMatrix.from_json(_read_json_file(args.beta_file))
        h = EnergyForm.oscillator(args.energy, s=beta.s)
        result = cea_multimode(beta, h)
    else:
        if args.beta is None:
            raise _UsageError("provide --beta or --beta-file")
        result = cea_one_mode(args.beta, args.energy)
    if args.format == "json":
        _emit(args, json.dumps(result.to_json(), indent=2) + "\n")
    else:
        div, unit = _unit(args)
        _emit(
            args,
            f"C_ea: {result.value / div:.6f} {unit}\n"
            "optimizer alpha_qq:\n" + _fmt_matrix(result.optimizer_alpha.alpha_qq) + "\n"
            "optimizer alpha_pp:\n" + _fmt_matrix(result.optimizer_alpha.alpha_pp) + "\n"
            f"constraint residual: {result.constraint_residual:.3e}\n"
            f"converged: {str(result.converged).lower()}\n",
        )
    return 0


def _rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = ["beta", "E", "C_ea_nats", "alpha_qq_opt", "alpha_pp_opt", "converged"]
    writer.writerow(header)
    for r in rows:
        writer.writerow(
            [repr(r[k]) if isinstance(r[k], float) else str(r[k]).lower() for k in header]
        )
    return buf.getvalue()


def cmd_sweep(args) -> int:
    try:
        if isinstance(args.betas, (list, tuple)):
            betas = [float(b) for b in args.betas]
        else:
            betas = [float(tok) for tok in str(args.betas).split(",") if tok.strip() != ""]
        e_min, e_max, steps = float(args.e_min), float(args.e_max), int(args.steps)
    except (TypeError, ValueError) as exc:
        raise _UsageError(f"cannot parse sweep grid: {exc}") from exc
    if steps < 1:
        raise _UsageError("--steps must be at least 1")
    E_values = np.linspace(e_min, e_max, steps)
    rows = sweep(E_values, betas)
    if args.format == "json":
        _emit(args, json.dumps(rows, indent=2) + "\n")
    else:
        _emit(args, _rows_to_csv(rows))
    return 0


def cmd_oracle_check(args) -> int:
    report = run_verification(
        n=int(args.n),
        x_nodes=int(args.nodes),
        seed=int(args.seed),
        n_mixtures=int(args.mixtures),
    )
    _emit(args, json.dumps(report, indent=2) + "\n")
    ok = report["all_within_tolerance"]
    n_cases = len(report["cases"])
    print(
        f"oracle-check: {n_cases} cases, "
        + ("all within tolerance" if ok else "TOLERANCE EXCEEDED"),
        file=sys.stderr,
    )
    return 0 if ok else 1


_COMMANDS = {
    "er": cmd_er,
    "posterior": cmd_posterior,
    "entropy": cmd_entropy,
    "capacity": cmd_capacity,
    "sweep": cmd_sweep,
    "oracle-check": cmd_oracle_check,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args = _apply_config_and_defaults(args)
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2
    except KeyError as exc:
        print(f"error: missing key {exc} in input file", file=sys.stderr)
        return 1
    except (QHomodyneError, ValueError) as exc:
        # library invariants and malformed matrix payloads: validation failures
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
