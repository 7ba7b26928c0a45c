"""Command-line interface.

Subcommands: solve (gr -> td + certificate), verify (recheck a
certificate), bench (solve a directory of .gr instances under a
per-instance timeout, writing a CSV table and matplotlib figures), and
oracle (brute-force width for small cross-checks).

Exit codes: 0 success, 1 usage error, 2 parse error, 3 verification
failure, 4 timeout.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
import time
from pathlib import Path

from .errors import CapExceededError, GraphInputError, ParseError, SolveTimeout
from .oracle import treewidth_exact
from .pace import emit_certificate, emit_td, parse_certificate, parse_gr
from .solver import SolverConfig, compute_treewidth, verify_certificate

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_VERIFY = 3
EXIT_TIMEOUT = 4

log = logging.getLogger("twsolve")


def _config_from(args) -> SolverConfig:
    return SolverConfig(
        unit_budget=args.budget,
        max_solutions=args.max_solutions,
        use_safe_separators=not args.no_safe_sep,
        seed=args.seed,
        timeout_s=args.timeout_s,
    )


def _read_graph(path: Path):
    try:
        return parse_gr(path.read_text())
    except OSError as exc:
        print(f"error: cannot read {path}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE) from None
    except ParseError as exc:
        print(f"error: {path}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE) from None


def cmd_solve(args) -> int:
    path = Path(args.graph)
    g = _read_graph(path)
    cfg = _config_from(args)
    try:
        cert = compute_treewidth(g, cfg)
    except SolveTimeout:
        print(f"timeout: {path} not solved within {args.timeout_s}s", file=sys.stderr)
        return EXIT_TIMEOUT
    except GraphInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    td_path = Path(args.td) if args.td else path.with_suffix(".td")
    cert_path = Path(args.cert) if args.cert else path.with_suffix(".cert")
    td_path.write_text(emit_td(g, cert.decomposition))
    cert_path.write_text(emit_certificate(g, cert))
    print(f"tw = {cert.width}")
    log.info("decomposition written to %s, certificate to %s", td_path, cert_path)
    return EXIT_OK


def cmd_verify(args) -> int:
    g = _read_graph(Path(args.graph))
    try:
        cert = parse_certificate(Path(args.certificate).read_text(), g)
    except OSError as exc:
        print(f"error: cannot read {args.certificate}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, GraphInputError) as exc:
        print(f"error: {args.certificate}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    ok, report = verify_certificate(g, cert)
    if ok:
        print(f"certificate ok: tw = {cert.width}")
        return EXIT_OK
    print(f"certificate INVALID: {report}")
    return EXIT_VERIFY


def cmd_oracle(args) -> int:
    g = _read_graph(Path(args.graph))
    try:
        print(f"tw = {treewidth_exact(g)}")
    except CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


def cmd_bench(args) -> int:
    directory = Path(args.directory)
    instances = sorted(directory.glob("*.gr"))
    if not instances:
        print(f"error: no .gr files in {directory}", file=sys.stderr)
        return EXIT_USAGE
    out_dir = Path(args.out_dir) if args.out_dir else directory / "bench_out"
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = []
    for path in instances:
        try:
            g = parse_gr(path.read_text())
        except ParseError as exc:
            print(f"error: {path}: {exc}", file=sys.stderr)
            return EXIT_PARSE
        cfg = _config_from(args)
        start = time.monotonic()
        width = None
        timed_out = False
        try:
            cert = compute_treewidth(g, cfg)
            width = cert.width
            (out_dir / f"{path.stem}.td").write_text(emit_td(g, cert.decomposition))
            (out_dir / f"{path.stem}.cert").write_text(emit_certificate(g, cert))
        except SolveTimeout:
            timed_out = True
        elapsed = time.monotonic() - start
        rows.append(
            {
                "instance": path.stem,
                "n": g.n,
                "m": g.num_edges(),
                "width": "" if width is None else width,
                "time_s": round(elapsed, 3),
                "timed_out": int(timed_out),
            }
        )
        status = "TIMEOUT" if timed_out else f"tw={width}"
        print(f"{path.stem:30s} n={g.n:<5d} m={g.num_edges():<6d} {status:>10s} {elapsed:8.2f}s")
    csv_path = out_dir / "results.csv"
    with csv_path.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0].keys()))
        writer.writeheader()
        writer.writerows(rows)
    _bench_figures(rows, out_dir)
    print(f"results written to {csv_path}")
    return EXIT_TIMEOUT if any(r["timed_out"] for r in rows) else EXIT_OK


def _bench_figures(rows, out_dir: Path) -> None:
    """Render the bench report: per-instance times and the solved-within-t
    curve, next to the CSV."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    names = [r["instance"] for r in rows]
    times = [r["time_s"] for r in rows]
    solved = [not r["timed_out"] for r in rows]

    fig, ax = plt.subplots(figsize=(max(6, 0.45 * len(rows)), 4))
    colors = ["tab:blue" if s else "tab:red" for s in solved]
    ax.bar(range(len(rows)), times, color=colors)
    ax.set_xticks(range(len(rows)))
    ax.set_xticklabels(names, rotation=60, ha="right", fontsize=8)
    ax.set_ylabel("solve time [s]")
    ax.set_title("per-instance solve time (red = timeout)")
    fig.tight_layout()
    fig.savefig(out_dir / "times.png", dpi=150)
    plt.close(fig)

    fig, ax = plt.subplots(figsize=(6, 4))
    done = sorted(t for t, s in zip(times, solved) if s)
    ax.step([0] + done, range(len(done) + 1), where="post")
    ax.set_xlabel("time budget per instance [s]")
    ax.set_ylabel("instances solved")
    ax.set_title("instances solved within time")
    fig.tight_layout()
    fig.savefig(out_dir / "solved_within.png", dpi=150)
    plt.close(fig)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=int, default=1000,
                        help="search-step budget unit per processed edge (default 1000)")
    common.add_argument("--timeout-s", type=float, default=None,
                        help="per-solve cooperative timeout in seconds")
    common.add_argument("--seed", type=int, default=None,
                        help="shuffle heuristic tie-breaks (default: deterministic)")
    common.add_argument("--no-safe-sep", action="store_true",
                        help="disable safe-separator preprocessing and contraction")
    common.add_argument("--max-solutions", type=int, default=16,
                        help="optimal decompositions traced per transfer (default 16)")
    common.add_argument("--log-level", default="warning",
                        choices=["debug", "info", "warning", "error"])
    parser = argparse.ArgumentParser(
        prog="twsolve",
        description="Certifying exact treewidth solver (PACE .gr format).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", parents=[common],
                       help="compute width, decomposition, certificate")
    p.add_argument("graph", help=".gr input path")
    p.add_argument("--td", help="output .td path (default: alongside input)")
    p.add_argument("--cert", help="output certificate path (default: alongside input)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", parents=[common],
                       help="recheck a certificate against its graph")
    p.add_argument("graph", help=".gr input path")
    p.add_argument("certificate", help="certificate document path")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", parents=[common],
                       help="solve every .gr in a directory, write report")
    p.add_argument("directory", help="directory of .gr instances")
    p.add_argument("--out-dir", help="report directory (default: <dir>/bench_out)")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("oracle", parents=[common],
                       help="brute-force width of a small instance")
    p.add_argument("graph", help=".gr input path")
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    logging.basicConfig(level=args.log_level.upper())
    try:
        return args.func(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
