"""Command-line front end: ``analyze``, ``simulate`` and ``sweep``.

Settings come from flags and an optional ``--config`` file of ``key=value``
lines (``#`` starts a comment); flags win over the file. Exit status is 0 on
success, 1 on invalid configuration and 2 on I/O failure.
"""
from __future__ import annotations

import argparse
import io
import sys
from pathlib import Path
from typing import Sequence

from .codes import DEFAULT_MAX_BLOCKS
from .experiment import (DEFAULT_B, DEFAULT_ELL, DEFAULT_Q, DEFAULT_R_CH, SweepSpec, crossover_entropy,
                         default_p_grid, run_point, run_sweep, write_csv)
from .source_model import ValidationError

EXIT_OK, EXIT_VALIDATION, EXIT_IO = 0, 1, 2

DEFAULTS = {
    "p": None,
    "p_values": None,
    "q": DEFAULT_Q,
    "r_ch": DEFAULT_R_CH,
    "ell": DEFAULT_ELL,
    "b": DEFAULT_B,
    "n_symbols": 200_000,
    "seed": 0,
    "warmup_blocks": 0,
    "max_blocks": DEFAULT_MAX_BLOCKS,
    "jobs": 1,
    "output": None,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse exits with 2 by default
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def parse_real(text: str) -> float:
    """Real number, also accepting a quotient such as ``1/6.5``."""
    text = text.strip()
    try:
        if "/" in text:
            num, den = text.split("/", 1)
            return float(num) / float(den)
        return float(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"not a real number: {text!r}") from exc


def parse_p_list(text: str) -> list[float]:
    return [parse_real(tok) for tok in text.split(",") if tok.strip()]


def read_config(path: str | Path) -> dict[str, str]:
    values: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in DEFAULTS:
            raise ValidationError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = value
    return values


_CONVERT = {
    "p": parse_real, "p_values": parse_p_list, "q": parse_real, "r_ch": parse_real,
    "ell": int, "b": int, "n_symbols": int, "seed": int, "warmup_blocks": int,
    "max_blocks": int, "jobs": int, "output": str,
}


def resolve_settings(args: argparse.Namespace) -> dict:
    settings = dict(DEFAULTS)
    if args.config:
        for key, value in read_config(args.config).items():
            try:
                settings[key] = _CONVERT[key](value)
            except ValueError as exc:
                raise ValidationError(f"bad value for {key}: {value!r}") from exc
    for key in DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value
    return settings


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value settings file")
    common.add_argument("--q", type=parse_real, help="arrival probability per time step")
    common.add_argument("--r-ch", dest="r_ch", type=parse_real,
                        help="channel rate in bits per time step (e.g. 1/6.5)")
    common.add_argument("--ell", type=int, help="Tunstall codeword length in bits")
    common.add_argument("--b", type=int, help="Huffman block length in symbols")
    common.add_argument("--max-blocks", dest="max_blocks", type=int,
                        help="cap on alphabet_size**b for the Huffman code")
    common.add_argument("--output", "-o", help="CSV destination (default: stdout)")

    sim_opts = argparse.ArgumentParser(add_help=False)
    sim_opts.add_argument("--n-symbols", dest="n_symbols", type=int)
    sim_opts.add_argument("--seed", type=int)
    sim_opts.add_argument("--warmup-blocks", dest="warmup_blocks", type=int)

    parser = _Parser(prog="tunstall-aoi", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    analyze = sub.add_parser("analyze", parents=[common], help="analytic bounds only")
    analyze.add_argument("--p", type=parse_real, help="Pr(X=1) of the binary source")
    analyze.add_argument("--p-values", dest="p_values", type=parse_p_list,
                         help="comma-separated p list (default grid when omitted)")
    simulate = sub.add_parser("simulate", parents=[common, sim_opts], help="one point, both schemes")
    simulate.add_argument("--p", type=parse_real)
    sweep = sub.add_parser("sweep", parents=[common, sim_opts], help="entropy sweep")
    sweep.add_argument("--p-values", dest="p_values", type=parse_p_list)
    sweep.add_argument("--jobs", type=int, help="parallel worker processes")
    return parser


def _emit(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        with open(output, "w", newline="") as fh:
            fh.write(text)


def _csv_text(points) -> str:
    buf = io.StringIO()
    write_csv(points, buf)
    return buf.getvalue()


def _run(args: argparse.Namespace) -> int:
    s = resolve_settings(args)
    if args.command == "analyze":
        if s["p"] is not None:
            p_values = [s["p"]]
        else:
            p_values = s["p_values"] if s["p_values"] is not None else default_p_grid()
        points = [run_point(p, s["q"], s["r_ch"], s["ell"], s["b"], 1, 0, simulate_schemes=False,
                            max_blocks=s["max_blocks"]) for p in p_values]
        _emit(_csv_text(sorted(points, key=lambda pt: pt.entropy)), s["output"])
        return EXIT_OK
    if args.command == "simulate":
        if s["p"] is None:
            raise ValidationError("simulate needs --p")
        point = run_point(s["p"], s["q"], s["r_ch"], s["ell"], s["b"], s["n_symbols"], s["seed"],
                          warmup_blocks=s["warmup_blocks"], max_blocks=s["max_blocks"])
        _emit(_csv_text([point]), s["output"])
        return EXIT_OK
    spec = SweepSpec(
        p_values=tuple(s["p_values"]) if s["p_values"] is not None else tuple(default_p_grid()),
        q=s["q"], r_ch=s["r_ch"], ell=s["ell"], b=s["b"], n_symbols=s["n_symbols"],
        seed=s["seed"], warmup_blocks=s["warmup_blocks"], output_path=s["output"],
        max_blocks=s["max_blocks"], jobs=s["jobs"],
    )
    points, _ = run_sweep(spec, out=sys.stdout if spec.output_path is None else None)
    crossing = crossover_entropy(points)
    summary = "none" if crossing is None else format(crossing, ".9g")
    print(f"crossover entropy (VtF delay < FtV delay): {summary}", file=sys.stderr)
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _run(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
