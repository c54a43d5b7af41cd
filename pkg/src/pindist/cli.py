"""Command-line front end.

Exit status: 0 success, 1 usage error, 2 cap or guard refusal,
3 invariant violation (for example an oracle mismatch).
"""

from __future__ import annotations

import argparse
import sys
import warnings
from pathlib import Path
from typing import List, Optional, Sequence, TextIO

from .errors import CapExceeded, InvariantViolation
from .experiments import GenSpec, SweepConfig, exhaustive_verify, generate_set, run_sweep
from .field import PrimeModulus
from .geometry import (
    PointSet2,
    best_pin,
    distance_set,
    guaranteed_pin,
    isosceles_count,
    isosceles_count_bruteforce,
    pinned_distance_set,
)
from .incidence import (
    build_instance,
    count_incidences_bucketed,
    count_incidences_naive,
    degenerate_case_count,
    export_instance,
    max_collinear,
    rudnev_ratio,
)

LISTING_CAP = 1000


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


def _prime(token: str) -> PrimeModulus:
    try:
        return PrimeModulus(int(token))
    except (TypeError, ValueError) as exc:
        raise argparse.ArgumentTypeError(f"invalid prime {token!r}: {exc}") from None


def _add_set_args(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--p", type=_prime, required=True, help="odd prime modulus")
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--set", metavar="FILE", help="file of integers, comma or newline separated")
    src.add_argument("--gen", metavar="SPEC", help="generator, e.g. interval, ap:1:3, gp:2:3, random")
    sp.add_argument("--size", type=int, help="size of the generated set (with --gen)")
    sp.add_argument("--seed", type=int, help="seed for random generators (with --gen)")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="pindist", description="Pinned algebraic distances over F_p.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("dist", help="distance set of A x A")
    _add_set_args(sp)

    sp = sub.add_parser("pin", help="best pin and the averaging-argument pin")
    _add_set_args(sp)

    sp = sub.add_parser("count-n", help="isosceles count N and its split")
    _add_set_args(sp)
    sp.add_argument("--oracle", action="store_true", help="also run the cubic brute force")

    sp = sub.add_parser("incidence", help="point-plane instance statistics")
    _add_set_args(sp)
    sp.add_argument("--naive", action="store_true", help="use the pairwise reference counter")
    sp.add_argument("--export", metavar="PREFIX", help="write PREFIX.points and PREFIX.planes")

    sp = sub.add_parser("verify", help="exhaustive check over all small A")
    sp.add_argument("--p", type=_prime, required=True)
    sp.add_argument("--max-size", type=int, required=True)
    sp.add_argument("--force", action="store_true", help="override the size guard")
    sp.add_argument("--symmetry", action="store_true", help="one representative per affine orbit")

    sp = sub.add_parser("sweep", help="run a configured sweep and write CSV")
    sp.add_argument("--config", required=True, metavar="FILE")
    sp.add_argument("--out", metavar="FILE", help="CSV path ('-' for stdout); overrides config")
    return ap


def read_set_file(path: str, p: int, err: TextIO) -> List[int]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read set file {path!r}: {exc.strerror}") from None
    tokens = [t for t in text.replace(",", " ").split() if t]
    vals = []
    for t in tokens:
        try:
            vals.append(int(t))
        except ValueError:
            raise UsageError(f"{path}: not an integer: {t!r}") from None
    reduced = {v % p for v in vals}
    if len(reduced) < len(set(vals)):
        err.write(f"warning: reduction mod {p} merged {len(set(vals)) - len(reduced)} value(s) in {path}\n")
    if not reduced:
        raise UsageError(f"{path}: empty set")
    return sorted(reduced)


def _load_set(args, err: TextIO) -> List[int]:
    p = args.p.p
    if args.set is not None:
        if args.size is not None or args.seed is not None:
            raise UsageError("--size/--seed only apply with --gen")
        return read_set_file(args.set, p, err)
    if args.size is None:
        raise UsageError("--gen requires --size")
    try:
        spec = GenSpec.parse(args.gen, args.seed)
        return sorted(generate_set(spec, args.size, args.p))
    except ValueError as exc:
        raise UsageError(f"--gen {args.gen!r}: {exc}") from None


def _emit(out: TextIO, key: str, value) -> None:
    out.write(f"{key}={value}\n")


def _fmt_point(u) -> str:
    return f"{u[0]},{u[1]}"


def _cmd_dist(args, out, err) -> int:
    A = _load_set(args, err)
    E = PointSet2.cartesian(A, args.p)
    D = sorted(distance_set(E))
    _emit(out, "p", args.p.p)
    _emit(out, "size_a", len(A))
    _emit(out, "delta_size", len(D))
    _emit(out, "distances", " ".join(map(str, D[:LISTING_CAP])))
    if len(D) > LISTING_CAP:
        _emit(out, "distances_truncated", len(D) - LISTING_CAP)
    return 0


def _cmd_pin(args, out, err) -> int:
    A = _load_set(args, err)
    E = PointSet2.cartesian(A, args.p)
    u, size = best_pin(E)
    g, bound = guaranteed_pin(E)
    g_size = len(pinned_distance_set(E, g))
    _emit(out, "best_pin", _fmt_point(u))
    _emit(out, "best_pin_size", size)
    _emit(out, "guaranteed_pin", _fmt_point(g))
    _emit(out, "guaranteed_pin_size", g_size)
    _emit(out, "guaranteed_bound", f"{bound.numerator}/{bound.denominator}")
    if g_size * bound.denominator < bound.numerator:
        raise InvariantViolation(f"guaranteed pin {g} has {g_size} distances, below {bound}")
    return 0


def _cmd_count_n(args, out, err) -> int:
    A = _load_set(args, err)
    E = PointSet2.cartesian(A, args.p)
    N = isosceles_count(E)
    deg = degenerate_case_count(A, args.p)
    _emit(out, "n_total", N)
    _emit(out, "n_restricted", N - deg)
    _emit(out, "n_degenerate", deg)
    if args.oracle:
        oracle = isosceles_count_bruteforce(E)
        _emit(out, "n_oracle", oracle)
        if oracle != N:
            raise InvariantViolation(f"oracle mismatch: histogram {N} vs brute force {oracle}")
        _emit(out, "oracle", "agree")
    return 0


def _cmd_incidence(args, out, err) -> int:
    A = _load_set(args, err)
    inst = build_instance(A, args.p)
    I = count_incidences_naive(inst) if args.naive else count_incidences_bucketed(inst)
    k = max_collinear(inst.points, args.p)
    if len(inst.points) > args.p.p ** 2:
        err.write(f"warning: |P| = {len(inst.points)} exceeds p^2 = {args.p.p ** 2}\n")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        r = rudnev_ratio(inst, I, k)
    _emit(out, "p_card", len(inst.points))
    _emit(out, "pi_card", len(inst.planes))
    _emit(out, "k_max", k)
    _emit(out, "incidences", I)
    _emit(out, "rudnev_ratio", f"{r.numerator}/{r.denominator}")
    _emit(out, "rudnev_ratio_float", f"{float(r):.9f}")
    if args.export:
        for path in export_instance(inst, args.export):
            err.write(f"wrote {path}\n")
    return 0


def _cmd_verify(args, out, err) -> int:
    s = exhaustive_verify(args.p, args.max_size, force=args.force, symmetry_reduction=args.symmetry)
    _emit(out, "p", s.p)
    _emit(out, "max_size", s.max_size)
    _emit(out, "cases", s.cases)
    _emit(out, "failures", len(s.failures))
    _emit(out, "min_theorem_ratio", f"{s.min_theorem_ratio:.9f}")
    _emit(out, "min_ratio_set", " ".join(map(str, s.min_ratio_set)))
    if s.failures:
        raise InvariantViolation(f"averaging bound failed on {len(s.failures)} set(s), first {s.failures[0]}")
    return 0


def _cmd_sweep(args, out, err) -> int:
    try:
        cfg = SweepConfig.parse(Path(args.config).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read config {args.config!r}: {exc.strerror}") from None
    except (ValueError, TypeError) as exc:
        raise UsageError(f"{args.config}: {exc}") from None
    target = args.out or cfg.out
    if not target:
        raise UsageError("sweep needs --out or an 'out' key in the config")
    res = run_sweep(cfg)
    csv_text = res.to_csv()
    if target == "-":
        out.write(csv_text)
    else:
        Path(target).write_text(csv_text)
        _emit(out, "rows", len(res.rows))
        if res.summary is not None:
            s = res.summary
            _emit(out, "errors", s.errors)
            _emit(out, "min_theorem_ratio", "" if s.min_theorem_ratio is None else f"{s.min_theorem_ratio:.9f}")
            _emit(out, "max_rudnev_ratio", "" if s.max_rudnev_ratio is None else f"{float(s.max_rudnev_ratio):.9f}")
    return 0


_COMMANDS = {
    "dist": _cmd_dist,
    "pin": _cmd_pin,
    "count-n": _cmd_count_n,
    "incidence": _cmd_incidence,
    "verify": _cmd_verify,
    "sweep": _cmd_sweep,
}


def main(argv: Optional[Sequence[str]] = None, out: Optional[TextIO] = None,
         err: Optional[TextIO] = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return _COMMANDS[args.command](args, out, err)
    except UsageError as exc:
        err.write(f"error: {exc}\n")
        return 1
    except CapExceeded as exc:
        err.write(f"refused: {exc}\n")
        return 2
    except InvariantViolation as exc:
        err.write(f"invariant violation: {exc}\n")
        return 3
    except ValueError as exc:
        err.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
