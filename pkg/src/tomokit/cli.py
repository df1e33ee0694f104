"""Command-line front end.

Exit codes: 0 on success (for ``validate``, success means every gate
passed; a failed gate exits 1), 2 for usage errors (bad descriptors,
malformed ranges, argparse rejections), 3 for numeric failures, which
also emit a one-line JSON object on stderr.

File outputs are written atomically (temp file in the target directory,
then rename) and carry provenance comments: package version, the exact
command line, and a short hash of the effective configuration.
"""

import argparse
import hashlib
import json
import math
import os
import shlex
import sys
import tempfile
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .charfun import TabulatedPdf, TabulatedPdfCharFn, parse_provider, provider_label
from .errors import DescriptorError, TomokitError, TruncationWarning
from .estimation import (
    EstimatorConfig,
    SampleSet,
    distance,
    histogram_estimate,
    kde_estimate,
    ks_statistic,
    sample_tomogram,
)
from .reconstruction import (
    ReconstructionConfig,
    density_matrix_grid,
    overlap_fidelity,
)
from .states import PseudoharmonicOscillator, parse_state
from .tomograms import (
    FrameParams,
    frame_from_squeeze,
    tomogram,
    tomogram_analytic,
    tomogram_domain,
    tomogram_numeric,
)
from .validator import (
    ANALYTIC_TOLERANCES,
    EMPIRICAL_TOLERANCES,
    ValidatorConfig,
    check_overlap,
    validate,
)


def _parse_range(text: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise DescriptorError(f"range must be min:max:count, got {text!r}")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise DescriptorError(f"range must be min:max:count, got {text!r}") from None
    if count < 2 or not lo < hi:
        raise DescriptorError("range needs min < max and count >= 2")
    return np.linspace(lo, hi, count)


def _frame_from_args(args) -> FrameParams:
    has_mu_nu = args.mu is not None or args.nu is not None
    if args.phi is not None:
        if has_mu_nu:
            raise DescriptorError("give either --mu/--nu or --phi, not both")
        return frame_from_squeeze(args.squeeze, args.phi)
    if args.mu is None and args.nu is None:
        return FrameParams(1.0, 0.0)
    return FrameParams(args.mu or 0.0, args.nu or 0.0)


def _add_frame_flags(sub) -> None:
    sub.add_argument("--mu", type=float, default=None, help="frame position weight")
    sub.add_argument("--nu", type=float, default=None, help="frame momentum weight")
    sub.add_argument(
        "--phi", type=float, default=None, help="rotation angle (alternative to mu/nu)"
    )
    sub.add_argument(
        "--squeeze", type=float, default=1.0, help="squeeze factor used with --phi"
    )


def _config_hash(payload: dict) -> str:
    text = json.dumps(payload, sort_keys=True, default=str)
    return hashlib.sha256(text.encode()).hexdigest()[:12]


def _provenance(args, payload: dict) -> str:
    cmd = shlex.join(["tomokit"] + list(args._argv))
    return (
        f"# tomokit {__version__}\n"
        f"# command: {cmd}\n"
        f"# config: {_config_hash(payload)}\n"
    )


def _write_text(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    target = Path(path)
    fd, tmp = tempfile.mkstemp(
        dir=str(target.parent) or ".", prefix=f".{target.name}.", suffix=".tmp"
    )
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _print_json(data: dict) -> None:
    sys.stdout.write(json.dumps(data, indent=2) + "\n")


def cmd_tomogram(args) -> int:
    model = parse_state(args.state)
    frame = _frame_from_args(args)
    x = _parse_range(args.x)
    if args.method == "analytic":
        w = tomogram_analytic(model, x, frame)
    elif args.method == "numeric":
        w = tomogram_numeric(model, x, frame)
    else:
        w = tomogram(model, x, frame)
    payload = {
        "state": args.state,
        "mu": frame.mu,
        "nu": frame.nu,
        "x": args.x,
        "method": args.method,
    }
    lines = [_provenance(args, payload), "X,mu,nu,W\n"]
    lines.extend(
        f"{xi:.12g},{frame.mu:.12g},{frame.nu:.12g},{wi:.12g}\n"
        for xi, wi in zip(x, w)
    )
    _write_text(args.out, "".join(lines))
    return 0


def cmd_charfun(args) -> int:
    provider = parse_provider(args.provider)
    t = args.t
    if args.grid is not None:
        axis = _parse_range(args.grid)
        mu_grid, nu_grid = np.meshgrid(axis, axis, indexing="ij")
        vals = np.asarray(provider.charfn(t, mu_grid, nu_grid), dtype=complex)
        payload = {"provider": args.provider, "t": t, "grid": args.grid}
        lines = [_provenance(args, payload), "mu,nu,re,im\n"]
        for i, m in enumerate(axis):
            for j, n in enumerate(axis):
                v = vals[i, j]
                lines.append(f"{m:.12g},{n:.12g},{v.real:.12g},{v.imag:.12g}\n")
        _write_text(args.out, "".join(lines))
        return 0
    frame = _frame_from_args(args)
    value = complex(provider.charfn(t, frame.mu, frame.nu))
    _print_json(
        {
            "provider": provider_label(provider),
            "t": t,
            "mu": frame.mu,
            "nu": frame.nu,
            "re": value.real,
            "im": value.imag,
        }
    )
    return 0


def _validator_config(args) -> ValidatorConfig:
    tols = EMPIRICAL_TOLERANCES if args.empirical else ANALYTIC_TOLERANCES
    return ValidatorConfig(
        halfwidth=args.halfwidth,
        lattice_step=args.step,
        tolerances=tols,
    )


def cmd_validate(args) -> int:
    if args.pdf_file is not None:
        pdf = TabulatedPdf.from_csv(args.pdf_file)
        provider = TabulatedPdfCharFn(pdf)
    else:
        if args.provider is None:
            raise DescriptorError("give a provider descriptor or --pdf-file")
        provider = parse_provider(args.provider)
    # the report's own warnings list carries truncation notices; the
    # Python-level warning would just duplicate them on stderr
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        report = validate(provider, _validator_config(args))
    text = json.dumps(report.to_dict(), indent=2) + "\n"
    _write_text(args.out, text)
    if args.out is not None:
        _print_json({"overall": report.overall, "report": args.out})
    return 0 if report.overall else 1


def cmd_purity(args) -> int:
    provider = parse_provider(args.provider)
    value = check_overlap(provider, provider)
    _print_json({"provider": provider_label(provider), "purity": value})
    return 0


def cmd_overlap(args) -> int:
    p1 = parse_provider(args.provider1)
    p2 = parse_provider(args.provider2)
    if args.fidelity:
        value = overlap_fidelity(p1, p2)
        key = "fidelity"
    else:
        value = check_overlap(p1, p2)
        key = "overlap"
    _print_json(
        {
            "provider1": provider_label(p1),
            "provider2": provider_label(p2),
            key: value,
        }
    )
    return 0


def cmd_reconstruct(args) -> int:
    provider = parse_provider(args.provider)
    y = _parse_range(args.grid)
    config = ReconstructionConfig(mu_halfwidth=args.mu_halfwidth)
    grid = density_matrix_grid(provider, y, config)
    payload = {"provider": args.provider, "grid": args.grid}
    if args.format == "csv":
        text = _provenance(args, payload) + grid.magnitude_csv()
    else:
        text = grid.to_json(indent=2) + "\n"
    _write_text(args.out, text)
    if args.out is not None:
        eigs = grid.eigenvalues()
        _print_json(
            {
                "trace": grid.trace(),
                "hermiticity_defect": grid.hermiticity_defect(),
                "top_eigenvalues": [float(v) for v in eigs[:4]],
                "out": args.out,
            }
        )
    return 0


def cmd_sample(args) -> int:
    if args.out is None:
        raise DescriptorError("sample needs --out to place the CSV and its sidecar")
    model = parse_state(args.state)
    frame = _frame_from_args(args)
    samples = sample_tomogram(model, frame, args.n_samples, args.seed)
    payload = {
        "state": args.state,
        "mu": frame.mu,
        "nu": frame.nu,
        "n": args.n_samples,
        "seed": args.seed,
    }
    lines = [_provenance(args, payload), "X\n"]
    lines.extend(f"{v:.17g}\n" for v in samples.values)
    _write_text(args.out, "".join(lines))
    meta = {
        "n": samples.n,
        "state": samples.state,
        "seed": samples.seed,
        "mu": frame.mu,
        "nu": frame.nu,
    }
    _write_text(f"{args.out}.meta.json", json.dumps(meta, indent=2) + "\n")
    _print_json({"out": args.out, "n": samples.n})
    return 0


def cmd_estimate(args) -> int:
    samples = SampleSet.from_csv(args.samples)
    bandwidth: float | str = "auto"
    if args.bandwidth is not None and args.bandwidth != "auto":
        try:
            bandwidth = float(args.bandwidth)
        except ValueError:
            raise DescriptorError(
                f"--bandwidth must be a number or 'auto', got {args.bandwidth!r}"
            ) from None
    rng = None
    if args.range is not None:
        grid = _parse_range(args.range + ":2")
        rng = (float(grid[0]), float(grid[-1]))
    config = EstimatorConfig(bins=args.bins, bandwidth=bandwidth, range=rng)
    if args.method == "hist":
        est = histogram_estimate(samples, config)
        centers = 0.5 * (est.edges[1:] + est.edges[:-1])
        dens = est.densities
    else:
        est = kde_estimate(samples, config)
        centers = est.x
        dens = est.w
    payload = {"samples": args.samples, "method": args.method, "bins": args.bins}
    lines = [_provenance(args, payload), "X,W\n"]
    lines.extend(f"{c:.12g},{d:.12g}\n" for c, d in zip(centers, dens))
    _write_text(args.out, "".join(lines))

    summary = {"method": args.method, "n": samples.n, "mass": est.mass()}
    if samples.state is not None and samples.frame is not None:
        model = parse_state(samples.state)
        lo, hi = tomogram_domain(model, samples.frame)
        grid = np.linspace(lo, hi, 2049)
        exact = TabulatedPdf(grid, tomogram(model, grid, samples.frame))
        summary["l1"] = distance(est, exact, "l1")
        summary["ks"] = ks_statistic(samples, exact)
    if args.out is not None:
        summary["out"] = args.out
        _print_json(summary)
    else:
        sys.stderr.write(json.dumps(summary) + "\n")
    return 0


_FIG_FRAME = FrameParams(math.sqrt(0.5), math.sqrt(0.5))


def _parse_int_list(text: str) -> list[int]:
    try:
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise DescriptorError(f"expected comma-separated integers, got {text!r}") from None


def _parse_float_list(text: str) -> list[float]:
    try:
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise DescriptorError(f"expected comma-separated numbers, got {text!r}") from None


def cmd_figures(args) -> int:
    ns = _parse_int_list(args.n) if args.n else None
    if args.fig == 1:
        ns = ns or [0, 1, 2, 10]
        states = [PseudoharmonicOscillator(a=0.0, n=n) for n in ns]
        hw = max(
            tomogram_domain(s, _FIG_FRAME, tail_mass=1e-4)[1] for s in states
        )
        x = np.linspace(-hw, hw, args.points)
        payload = {"fig": 1, "n": ns}
        lines = [_provenance(args, payload), "n,X,W\n"]
        for state in states:
            w = tomogram_analytic(state, x, _FIG_FRAME)
            lines.extend(
                f"{state.n},{xi:.12g},{wi:.12g}\n" for xi, wi in zip(x, w)
            )
    else:
        ns = ns or [0, 1]
        avals = _parse_float_list(args.a) if args.a else [0.0, 10.0, 100.0, 1000.0]
        states = [
            PseudoharmonicOscillator(a=a, n=n) for a in avals for n in ns
        ]
        hw = max(
            tomogram_domain(s, _FIG_FRAME, tail_mass=1e-4)[1] for s in states
        )
        x = np.linspace(-hw, hw, args.points)
        payload = {"fig": 2, "n": ns, "a": avals}
        lines = [_provenance(args, payload), "a,n,X,W\n"]
        for state in states:
            w = tomogram_analytic(state, x, _FIG_FRAME)
            lines.extend(
                f"{state.a:.12g},{state.n},{xi:.12g},{wi:.12g}\n"
                for xi, wi in zip(x, w)
            )
    _write_text(args.out, "".join(lines))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tomokit",
        description="Symplectic tomograms: evaluation, validation, "
        "reconstruction, sampling, and estimation.",
    )
    parser.add_argument("--version", action="version", version=f"tomokit {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("tomogram", help="evaluate a tomogram on an X grid")
    p.add_argument("state", help="state descriptor, e.g. ho:n=0")
    _add_frame_flags(p)
    p.add_argument("--x", default="-6:6:241", help="X grid as min:max:count")
    p.add_argument(
        "--method", choices=["auto", "analytic", "numeric"], default="auto"
    )
    p.add_argument("--out", default=None, help="output CSV (default stdout)")
    p.set_defaults(func=cmd_tomogram)

    p = subs.add_parser("charfun", help="evaluate a characteristic function")
    p.add_argument("provider", help="provider descriptor, e.g. ho:n=0 or gamma:k=2,theta=1")
    _add_frame_flags(p)
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--grid", default=None, help="frame lattice as min:max:count")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_charfun)

    p = subs.add_parser("validate", help="run the quantum-tomogram gates")
    p.add_argument("provider", nargs="?", default=None)
    p.add_argument("--pdf-file", default=None, help="CSV of X,W pairs to validate")
    p.add_argument("--halfwidth", type=float, default=None)
    p.add_argument("--step", type=float, default=0.1)
    p.add_argument(
        "--empirical",
        action="store_true",
        help="use the looser thresholds meant for sampled data",
    )
    p.add_argument("--out", default=None, help="write the report JSON here")
    p.set_defaults(func=cmd_validate)

    p = subs.add_parser("purity", help="Tr(rho^2) from the characteristic function")
    p.add_argument("provider")
    p.set_defaults(func=cmd_purity)

    p = subs.add_parser("overlap", help="overlap or fidelity of two providers")
    p.add_argument("provider1")
    p.add_argument("provider2")
    p.add_argument("--fidelity", action="store_true")
    p.set_defaults(func=cmd_overlap)

    p = subs.add_parser("reconstruct", help="density matrix on a position grid")
    p.add_argument("provider")
    p.add_argument("--grid", default="-6:6:121", help="y grid as min:max:count")
    p.add_argument("--mu-halfwidth", type=float, default=None)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_reconstruct)

    p = subs.add_parser("sample", help="draw homodyne samples at one frame")
    p.add_argument("state")
    _add_frame_flags(p)
    p.add_argument("--n-samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=False, default=None)
    p.set_defaults(func=cmd_sample)

    p = subs.add_parser("estimate", help="density estimate from a sample CSV")
    p.add_argument("samples", help="CSV written by the sample command")
    p.add_argument("--method", choices=["hist", "kde"], default="hist")
    p.add_argument("--bins", type=int, default=64)
    p.add_argument("--bandwidth", default=None, help="number or 'auto'")
    p.add_argument("--range", default=None, help="estimation window as min:max")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_estimate)

    p = subs.add_parser("figures", help="reference curve families as CSV")
    p.add_argument("--fig", type=int, choices=[1, 2], required=True)
    p.add_argument("--n", default=None, help="comma-separated level list")
    p.add_argument("--a", default=None, help="comma-separated coupling list (fig 2)")
    p.add_argument("--points", type=int, default=1201)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_figures)

    return parser


#: Flags whose values are range strings like -4:4:401, which argparse
#: would otherwise read as option names.
_RANGE_FLAGS = {"--x", "--grid", "--range"}


def _glue_range_values(argv: list[str]) -> list[str]:
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else ""
        if (
            tok in _RANGE_FLAGS
            and len(nxt) > 1
            and nxt[0] == "-"
            and (nxt[1].isdigit() or nxt[1] == ".")
        ):
            out.append(f"{tok}={nxt}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(_glue_range_values(argv))
    args._argv = argv
    try:
        return args.func(args)
    except DescriptorError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except TomokitError as exc:
        sys.stderr.write(
            json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n"
        )
        return 3
    except (ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
