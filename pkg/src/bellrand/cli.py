"""Command-line entry point.

Exit status: 0 on success, 1 when a numerical check fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path

import numpy as np

from .behavior import compute_behavior
from .encoding import (
    BRUTE_FORCE_MAX_SETTINGS,
    MAX_SETTINGS,
    local_bound_bruteforce,
    local_bound_closed,
    quantum_optimum,
)
from .errors import BellRandError
from .randomness import table1_value
from .realization import bell_value, canonical_realization, sos_certificate
from .report import RunManifest, plot_figure2, write_csv, write_text
from .reproduce import (
    DEFAULT_RESTARTS,
    figure2,
    run_certification,
    table1,
    table1_mismatches,
)

log = logging.getLogger("bellrand")

EXIT_OK, EXIT_NUMERIC, EXIT_USAGE = 0, 1, 2

SYMBOLIC_MAX_N = 18


def _emit(args, payload: dict, csv_rows: list[tuple[str, object]]) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=1))
    else:
        print("field,value")
        for k, v in csv_rows:
            print(f"{k},{v:.17g}" if isinstance(v, float) else f"{k},{v}")


def cmd_table1(args) -> int:
    t0 = time.perf_counter()
    rows = table1(restarts=args.restarts, seed=args.seed)
    out = Path(args.out)
    path = write_csv(out / "table1.csv", ["n", "m", "source", "bits"], [(r.n, r.m, r.source, r.bits) for r in rows])
    manifest = RunManifest("table1", {"restarts": args.restarts, "tolerance": args.tolerance}, seed=args.seed)
    manifest.add(path)
    manifest.duration_s = round(time.perf_counter() - t0, 3)
    manifest.write(out)

    sim = {(r.n, r.m): r.bits for r in rows if r.source == "simulated"}
    print("  n  " + "".join(f"{'m=' + str(m):>18}" for m in (1, 2, 3)))
    for n in range(2, 7):
        cells = "".join(f"{table1_value(n, m):>9.4f}/{sim[(n, m)]:<8.4f}" for m in (1, 2, 3))
        print(f"  {n}  {cells}")
    print("(closed form / simulated, bits)")
    bad = table1_mismatches(rows, args.tolerance)
    for n, m, closed, got in bad:
        print(f"MISMATCH n={n} m={m}: closed form {closed:.4f}, simulated {got:.4f}", file=sys.stderr)
    return EXIT_NUMERIC if bad else EXIT_OK


def cmd_figure2(args) -> int:
    if not 6 <= args.n_max <= 20:
        raise _UsageError("--n-max must lie in 6..20")
    t0 = time.perf_counter()
    rows = figure2(args.n_max, restarts=args.restarts, seed=args.seed, max_iterations=args.max_iterations)
    out = Path(args.out)
    csv_path = write_csv(
        out / "figure2.csv",
        ["n", "single_copy_bits", "multi_copy_bits", "converged"],
        [(r.n, r.single_copy_bits, r.multi_copy_bits, r.converged) for r in rows],
    )
    svg_path = plot_figure2(rows, out / "figure2.svg")
    manifest = RunManifest(
        "figure2",
        {"n_max": args.n_max, "restarts": args.restarts, "max_iterations": args.max_iterations},
        seed=args.seed,
    )
    manifest.add(csv_path)
    manifest.add(svg_path)
    manifest.duration_s = round(time.perf_counter() - t0, 3)
    manifest.write(out)

    failures = []
    for r in rows:
        flag = "" if r.converged else "  (not converged)"
        print(f"n={r.n:2d}  single {r.single_copy_bits:.4f}  multi {r.multi_copy_bits:.4f}{flag}")
        if r.n >= 4 and r.single_copy_bits > r.multi_copy_bits + args.tolerance:
            failures.append(f"n={r.n}: single copy exceeds multi copy")
        if 4 <= r.n <= 6 and abs(r.single_copy_bits - table1_value(r.n, 1)) > args.tolerance:
            failures.append(f"n={r.n}: single copy {r.single_copy_bits:.4f} != {table1_value(r.n, 1):.4f}")
    for f in failures:
        print(f"CHECK FAILED {f}", file=sys.stderr)
    return EXIT_NUMERIC if failures else EXIT_OK


def cmd_certify(args) -> int:
    if args.n < 2 or args.copies < 1:
        raise _UsageError("need --n >= 2 and --copies >= 1")
    if args.copies >= args.n // 2 and args.n > SYMBOLIC_MAX_N:
        raise _UsageError(f"--n above {SYMBOLIC_MAX_N} is not supported")
    if args.copies < args.n // 2 and (1 << (2 * args.copies)) > 4096:
        raise _UsageError("see-saw local dimension too large")
    t0 = time.perf_counter()
    run = run_certification(args.n, args.copies, restarts=args.restarts, seed=args.seed)
    rep = run.report
    if args.format == "json":
        text = rep.to_json()
    else:
        header = "n,m,bell_value,local_bound,violated,certified,p_star,r_min_bits,r_max_bits,i,y,p_max,r_bits"
        lines = [header]
        head = f"{rep.n},{rep.m},{rep.bell_value:.17g},{rep.local_bound},{str(rep.violated).lower()},"
        head += f"{str(rep.certified).lower()},{rep.p_star:.17g},{rep.r_min:.17g},{rep.r_max:.17g}"
        bits = rep.per_pair_entropy
        for i, y in np.ndindex(rep.per_pair_pmax.shape):
            lines.append(f"{head},{i + 1},{y + 1},{rep.per_pair_pmax[i, y]:.17g},{bits[i, y]:.17g}")
        text = "\n".join(lines) + "\n"
    if args.out:
        out = Path(args.out)
        ext = "json" if args.format == "json" else "csv"
        paths = [write_text(out / f"report_n{args.n}_m{args.copies}.{ext}", text)]
        behavior = compute_behavior(run.realization)
        if behavior.materialized:
            paths.append(write_text(out / f"behavior_n{args.n}_m{args.copies}.csv", behavior.to_csv()))
            paths.append(write_text(out / f"behavior_n{args.n}_m{args.copies}.json", behavior.to_json()))
        manifest = RunManifest(
            "certify", {"n": args.n, "copies": args.copies, "restarts": args.restarts, "format": args.format},
            seed=args.seed,
        )
        for p in paths:
            manifest.add(p)
        manifest.duration_s = round(time.perf_counter() - t0, 3)
        manifest.write(out)
        print(rep.summary())
    else:
        sys.stdout.write(text)
        print(rep.summary(), file=sys.stderr)
    return EXIT_OK


def cmd_bounds(args) -> int:
    n = args.n
    payload: dict = {"n": n, "local_bound_closed": local_bound_closed(n)}
    if n <= BRUTE_FORCE_MAX_SETTINGS:
        payload["local_bound_bruteforce"] = local_bound_bruteforce(n)
    else:
        payload["local_bound_bruteforce"] = None
        log.warning("brute-force local bound skipped: n > %d", BRUTE_FORCE_MAX_SETTINGS)
    payload["quantum_optimum"] = quantum_optimum(n)
    if n <= SYMBOLIC_MAX_N:
        payload["quantum_realized"] = bell_value(canonical_realization(n))
    else:
        payload["quantum_realized"] = None
    _emit(args, payload, list(payload.items()))
    ok = payload["local_bound_bruteforce"] in (None, payload["local_bound_closed"])
    if payload["quantum_realized"] is not None:
        ok &= abs(payload["quantum_realized"] - payload["quantum_optimum"]) <= 1e-9 * payload["quantum_optimum"]
    return EXIT_OK if ok else EXIT_NUMERIC


def cmd_sos(args) -> int:
    n = args.n
    if n > SYMBOLIC_MAX_N:
        raise _UsageError(f"--n above {SYMBOLIC_MAX_N} is not supported")
    real = canonical_realization(n)
    cert = sos_certificate(real)
    if cert.min_eigenvalue is None:
        log.warning("dense SOS operator skipped: global dimension %d too large", real.global_dim)
    payload = {
        "n": n,
        "m": real.m,
        "local_bound": local_bound_closed(n),
        "quantum_optimum": quantum_optimum(n),
        "beta": cert.beta,
        "gap": cert.gap,
        "min_eigenvalue": cert.min_eigenvalue,
    }
    _emit(args, payload, list(payload.items()))
    ok = cert.gap <= 1e-9 and (cert.min_eigenvalue is None or cert.min_eigenvalue >= -1e-9)
    return EXIT_OK if ok else EXIT_NUMERIC


def cmd_seesaw(args) -> int:
    from .seesaw import SeesawConfig, seesaw_optimize

    cfg = SeesawConfig(
        n=args.n,
        local_dim=1 << args.copies,
        restarts=args.restarts,
        max_iterations=args.max_iterations,
        seed=args.seed,
    )
    res = seesaw_optimize(cfg)
    payload = {
        "n": args.n,
        "local_dim": cfg.local_dim,
        "best_value": res.best_value,
        "best_restart": res.best_restart + 1,
        "iterations_used": res.iterations_used,
        "converged": res.converged,
        "per_restart_values": res.per_restart_values,
    }
    if args.format == "json":
        print(json.dumps(payload, indent=1))
    else:
        print("restart,value,converged")
        for k, (v, c) in enumerate(zip(res.per_restart_values, res.per_restart_converged), 1):
            print(f"{k},{v:.17g},{str(c).lower()}")
    return EXIT_OK


class _UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bellrand", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, seed=True, restarts=None, out=True, fmt=False, tol=False):
        if seed:
            sp.add_argument("--seed", type=int, default=0)
        if restarts is not None:
            sp.add_argument("--restarts", type=int, default=restarts)
        if out:
            sp.add_argument("--out", default="." if out is True else None)
        if fmt:
            sp.add_argument("--format", choices=("json", "csv"), default="json")
        if tol:
            sp.add_argument("--tolerance", type=float, default=1e-3)

    t1 = sub.add_parser("table1", help="randomness for n = 2..6 settings and m = 1..3 Bell pairs")
    common(t1, restarts=DEFAULT_RESTARTS, tol=True)
    t1.set_defaults(func=cmd_table1)

    f2 = sub.add_parser("figure2", help="single copy versus floor(n/2) copies across n")
    f2.add_argument("--n-max", type=int, default=10)
    f2.add_argument("--max-iterations", type=int, default=5000)
    common(f2, restarts=10, tol=True)
    f2.set_defaults(func=cmd_figure2)

    ce = sub.add_parser("certify", help="randomness report for n settings and a number of Bell pairs")
    ce.add_argument("--n", type=int, required=True)
    ce.add_argument("--copies", type=int, required=True)
    common(ce, restarts=DEFAULT_RESTARTS, out="optional", fmt=True)
    ce.set_defaults(func=cmd_certify)

    bo = sub.add_parser("bounds", help="local bound and quantum optimum")
    bo.add_argument("--n", type=int, required=True)
    common(bo, seed=False, out=False, fmt=True)
    bo.set_defaults(func=cmd_bounds)

    so = sub.add_parser("sos", help="sum-of-squares certificate on the canonical realization")
    so.add_argument("--n", type=int, required=True)
    common(so, seed=False, out=False, fmt=True)
    so.set_defaults(func=cmd_sos)

    ss = sub.add_parser("seesaw", help="see-saw maximization at local dimension 2**copies")
    ss.add_argument("--n", type=int, required=True)
    ss.add_argument("--copies", type=int, default=1)
    ss.add_argument("--max-iterations", type=int, default=5000)
    common(ss, restarts=DEFAULT_RESTARTS, out=False, fmt=True)
    ss.set_defaults(func=cmd_seesaw)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    n = getattr(args, "n", None)
    if n is not None and not 2 <= n <= MAX_SETTINGS:
        parser.error(f"--n must lie in 2..{MAX_SETTINGS}")
    if getattr(args, "restarts", 1) < 1:
        parser.error("--restarts must be >= 1")
    try:
        return args.func(args)
    except _UsageError as exc:
        parser.error(str(exc))
    except BellRandError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
