"""Set generators, single-case reports, sweeps and exhaustive verification."""

from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import dataclass, field, fields, replace
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Set, TextIO, Tuple

import numpy as np

from ._parallel import ordered_map, ordered_starmap
from .errors import CapExceeded, InvariantViolation
from .field import ModulusLike, PrimeModulus, as_modulus, sqrt_minus_one
from .geometry import PointSet2, pin_statistics
from .incidence import (
    COLLINEAR_PAIR_CAP,
    INSTANCE_CAP,
    NAIVE_CAP,
    RESTRICTED_CAP,
    build_instance,
    count_incidences_bucketed,
    count_incidences_naive,
    degenerate_case_count,
    max_collinear,
)

KINDS = (
    "interval",
    "arithmetic_progression",
    "geometric_progression",
    "random_subset",
    "explicit_list",
    "isotropic_line_section",
)
_ALIASES = {
    "interval": "interval",
    "ap": "arithmetic_progression",
    "arithmetic_progression": "arithmetic_progression",
    "gp": "geometric_progression",
    "geometric_progression": "geometric_progression",
    "random": "random_subset",
    "random_subset": "random_subset",
    "list": "explicit_list",
    "explicit_list": "explicit_list",
    "iso": "isotropic_line_section",
    "isotropic": "isotropic_line_section",
    "isotropic_line_section": "isotropic_line_section",
}
_SHORT = {
    "interval": "interval",
    "arithmetic_progression": "ap",
    "geometric_progression": "gp",
    "random_subset": "random",
    "explicit_list": "list",
    "isotropic_line_section": "iso",
}

CSV_COLUMNS = (
    "p", "size_a", "gen_kind", "seed", "delta_size", "best_pin_x", "best_pin_y",
    "best_pin_size", "guaranteed_bound_num", "guaranteed_bound_den", "n_total",
    "n_restricted", "n_degenerate", "p_card", "k_max", "incidences", "rudnev_ratio",
    "theorem_ratio", "flag_a_vs_p23", "flag_p_vs_p2", "error",
)


@dataclass(frozen=True)
class GenSpec:
    kind: str
    params: Tuple[int, ...] = ()
    seed: Optional[int] = None

    def __post_init__(self) -> None:
        kind = _ALIASES.get(self.kind)
        if kind is None:
            raise ValueError(f"unknown generator kind {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "params", tuple(int(t) for t in self.params))

    @classmethod
    def parse(cls, text: str, seed: Optional[int] = None) -> "GenSpec":
        """``kind[:param[:param...]]``, e.g. ``ap:1:3``, ``gp:2:3``, ``random``."""
        head, *rest = text.strip().split(":")
        try:
            params = tuple(int(t) for t in rest)
        except ValueError:
            bad = next(t for t in rest if not t.lstrip("-").isdigit())
            raise ValueError(f"malformed generator parameter {bad!r} in {text!r}") from None
        return cls(head, params, seed)

    def __str__(self) -> str:
        return ":".join([_SHORT[self.kind], *map(str, self.params)])


def _multiplicative_order(r: int, p: int) -> int:
    k, x = 1, r % p
    while x != 1:
        x = x * r % p
        k += 1
    return k


def generate_set(spec: GenSpec, size: int, m: ModulusLike) -> Set[int]:
    """A subset of F_p of exactly ``size`` elements, deterministic in (spec, seed)."""
    m = as_modulus(m)
    p = m.p
    if size < 0 or size > p:
        raise ValueError(f"size {size} not achievable in F_{p}")
    kind, prm = spec.kind, spec.params

    if kind == "interval":
        start = prm[0] if prm else 0
        out = {(start + t) % p for t in range(size)}
    elif kind == "arithmetic_progression":
        if len(prm) != 2:
            raise ValueError("arithmetic_progression needs start and step")
        start, step = prm
        if step % p == 0:
            raise ValueError("arithmetic_progression step must be nonzero mod p")
        out = {(start + t * step) % p for t in range(size)}
    elif kind == "geometric_progression":
        if len(prm) != 2:
            raise ValueError("geometric_progression needs start and ratio")
        start, ratio = prm[0] % p, prm[1] % p
        if start == 0:
            raise ValueError("geometric_progression start must be nonzero mod p")
        if ratio in (0, 1):
            raise ValueError(f"geometric_progression ratio {prm[1]} is 0 or 1 mod p")
        order = _multiplicative_order(ratio, p)
        if size > order:
            raise ValueError(f"ratio {ratio} has order {order} < requested size {size}")
        out = {start * pow(ratio, t, p) % p for t in range(size)}
    elif kind == "random_subset":
        rng = np.random.default_rng(spec.seed if spec.seed is not None else 0)
        out = {int(t) for t in rng.choice(p, size=size, replace=False)}
    elif kind == "explicit_list":
        out = {t % p for t in prm}
        if len(out) != size:
            raise ValueError(f"explicit list has {len(out)} distinct residues, requested {size}")
    else:
        i = sqrt_minus_one(m)
        if i is None:
            raise ValueError(f"no isotropic direction over F_{p} (p = 3 mod 4)")
        out = {i * t % p for t in range(size)}

    if len(out) != size:
        raise InvariantViolation(f"{spec} produced {len(out)} elements, expected {size}")
    return out


@dataclass(frozen=True)
class Caps:
    """Per-field limits; a field whose cap is exceeded is left empty."""

    distance_pairs: int = 10 ** 10
    instance: int = INSTANCE_CAP
    collinear_pairs: int = COLLINEAR_PAIR_CAP
    naive: int = NAIVE_CAP
    use_naive: bool = False
    incidences: bool = True


@dataclass
class CaseReport:
    p: int
    size_a: int
    gen_kind: str = ""
    seed: Optional[int] = None
    delta_size: Optional[int] = None
    best_pin: Optional[Tuple[int, int]] = None
    best_pin_size: Optional[int] = None
    guaranteed_pin: Optional[Tuple[int, int]] = None
    guaranteed_pin_size: Optional[int] = None
    guaranteed_bound: Optional[Fraction] = None
    n_total: Optional[int] = None
    n_restricted: Optional[int] = None
    n_degenerate: Optional[int] = None
    p_card: Optional[int] = None
    k_max: Optional[int] = None
    incidences: Optional[int] = None
    rudnev_ratio: Optional[Fraction] = None
    theorem_ratio: Optional[float] = None
    flag_a_vs_p23: Optional[bool] = None
    flag_p_vs_p2: Optional[bool] = None
    error: str = ""

    def as_row(self) -> Dict[str, str]:
        def s(v) -> str:
            if v is None:
                return ""
            if isinstance(v, bool):
                return "1" if v else "0"
            return str(v)

        return {
            "p": s(self.p),
            "size_a": s(self.size_a),
            "gen_kind": self.gen_kind,
            "seed": s(self.seed),
            "delta_size": s(self.delta_size),
            "best_pin_x": s(self.best_pin and self.best_pin[0]),
            "best_pin_y": s(self.best_pin and self.best_pin[1]),
            "best_pin_size": s(self.best_pin_size),
            "guaranteed_bound_num": s(self.guaranteed_bound and self.guaranteed_bound.numerator),
            "guaranteed_bound_den": s(self.guaranteed_bound and self.guaranteed_bound.denominator),
            "n_total": s(self.n_total),
            "n_restricted": s(self.n_restricted),
            "n_degenerate": s(self.n_degenerate),
            "p_card": s(self.p_card),
            "k_max": s(self.k_max),
            "incidences": s(self.incidences),
            "rudnev_ratio": "" if self.rudnev_ratio is None else f"{float(self.rudnev_ratio):.9f}",
            "theorem_ratio": "" if self.theorem_ratio is None else f"{self.theorem_ratio:.9f}",
            "flag_a_vs_p23": s(self.flag_a_vs_p23),
            "flag_p_vs_p2": s(self.flag_p_vs_p2),
            "error": self.error,
        }


def theorem_ratio(best_size: int, size_a: int, p: int) -> float:
    """best_size / min(p, |A|^{3/2}), rounded to 1e-9."""
    return round(best_size / min(p, size_a ** 1.5), 9)


def _lemma_holds(pin_size: int, N: int, n: int) -> bool:
    return pin_size * N >= n ** 3


def _distance_fields(rep: CaseReport, A: Sequence[int], m: PrimeModulus, caps: Caps,
                     threads: Optional[int]) -> None:
    E = PointSet2.cartesian(A, m)
    n = len(E)
    if n * n > caps.distance_pairs:
        raise CapExceeded(f"|E|^2 = {n * n} exceeds distance cap {caps.distance_pairs}")
    energy, distinct = pin_statistics(E, threads)
    N = int(sum(int(e) for e in energy))
    ig = int(np.argmin(energy))
    ib = int(np.argmax(distinct))
    pts = E.points

    # distance set of A x A is (A - A)^2 + (A - A)^2
    d = np.unique((np.asarray(A)[:, None] - np.asarray(A)[None, :]) % m.p)
    sq = np.unique(d * d % m.p)
    rep.delta_size = len(np.unique((sq[:, None] + sq[None, :]) % m.p))
    rep.n_total = N
    rep.guaranteed_pin = pts[ig]
    rep.guaranteed_pin_size = int(distinct[ig])
    rep.guaranteed_bound = Fraction(n ** 3, N)
    rep.best_pin = pts[ib]
    rep.best_pin_size = int(distinct[ib])
    rep.theorem_ratio = theorem_ratio(rep.best_pin_size, len(A), m.p)
    rep.flag_a_vs_p23 = len(A) ** 3 <= m.p ** 2

    if not _lemma_holds(rep.guaranteed_pin_size, N, n):
        raise InvariantViolation(
            f"averaging bound fails at pin {rep.guaranteed_pin}: {rep.guaranteed_pin_size} * {N} < {n ** 3}")
    if rep.best_pin_size < math.ceil(rep.guaranteed_bound):
        raise InvariantViolation("best pin below the guaranteed bound")

    rep.n_degenerate = degenerate_case_count(A, m, RESTRICTED_CAP)
    rep.n_restricted = N - rep.n_degenerate
    if rep.n_restricted < 0 or rep.n_degenerate > 4 * len(A) ** 4:
        raise InvariantViolation(f"degenerate count {rep.n_degenerate} out of range")


def _incidence_fields(rep: CaseReport, A: Sequence[int], m: PrimeModulus, caps: Caps,
                      threads: Optional[int]) -> None:
    inst = build_instance(A, m, caps.instance)
    rep.p_card = len(inst.points)
    rep.flag_p_vs_p2 = rep.p_card <= m.p ** 2
    if caps.use_naive:
        I = count_incidences_naive(inst, caps.naive)
    else:
        I = count_incidences_bucketed(inst, threads)
    if rep.n_restricted is not None and I != rep.n_restricted:
        raise InvariantViolation(f"incidences {I} != restricted isosceles count {rep.n_restricted}")
    rep.incidences = I
    rep.k_max = max_collinear(inst.points, m, caps.collinear_pairs, threads)
    if rep.k_max > 2 * len(A):
        raise InvariantViolation(f"k = {rep.k_max} exceeds 2|A| = {2 * len(A)}")
    n = rep.p_card
    rep.rudnev_ratio = Fraction(I, math.isqrt(n ** 3) + rep.k_max * n)


def run_case(A: Iterable[int], m: ModulusLike, caps: Optional[Caps] = None, *,
             gen_kind: str = "", seed: Optional[int] = None,
             threads: Optional[int] = None) -> CaseReport:
    """Every statistic of the pinned-distance argument for E = A x A.

    Cap refusals leave the affected fields empty and are noted in ``error``;
    invariant violations propagate.
    """
    m = as_modulus(m)
    caps = caps or Caps()
    A = sorted({int(a) % m.p for a in A})
    if not A:
        raise ValueError("A is empty")
    rep = CaseReport(p=m.p, size_a=len(A), gen_kind=gen_kind, seed=seed)
    errors = []
    try:
        _distance_fields(rep, A, m, caps, threads)
    except CapExceeded as exc:
        errors.append(f"distance: {exc}")
    if caps.incidences and len(A) >= 2:
        try:
            _incidence_fields(rep, A, m, caps, threads)
        except CapExceeded as exc:
            errors.append(f"incidence: {exc}")
    rep.error = "; ".join(errors)
    return rep


@dataclass
class SweepConfig:
    primes: List[int] = field(default_factory=list)
    sizes: List[int] = field(default_factory=list)
    specs: List[GenSpec] = field(default_factory=list)
    caps: Caps = field(default_factory=Caps)
    out: Optional[str] = None
    seed: int = 0
    threads: Optional[int] = None

    def __post_init__(self) -> None:
        for p in self.primes:
            as_modulus(p)

    @classmethod
    def parse(cls, text: str) -> "SweepConfig":
        """Flat ``key = value`` lines; ``#`` starts a comment.

        Keys: primes, sizes, specs (comma separated), seed, out, threads,
        and the cap fields distance_pairs, instance, collinear_pairs,
        naive, use_naive, incidences.
        """
        kv: Dict[str, str] = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"line {lineno}: expected key = value, got {raw.strip()!r}")
            k, v = (t.strip() for t in line.split("=", 1))
            kv[k] = v

        def ints(key: str) -> List[int]:
            items = [t for t in kv.pop(key, "").replace(";", ",").split(",") if t.strip()]
            try:
                return [int(t) for t in items]
            except ValueError:
                bad = next(t for t in items if not t.strip().lstrip("-").isdigit())
                raise ValueError(f"{key}: not an integer: {bad.strip()!r}") from None

        def flag(v: str) -> bool:
            if v.lower() in ("1", "true", "yes", "on"):
                return True
            if v.lower() in ("0", "false", "no", "off"):
                return False
            raise ValueError(f"not a boolean: {v!r}")

        primes, sizes = ints("primes"), ints("sizes")
        specs = [GenSpec.parse(t) for t in kv.pop("specs", "").replace(";", ",").split(",") if t.strip()]
        cap_kw = {}
        for f in fields(Caps):
            if f.name in kv:
                v = kv.pop(f.name)
                cap_kw[f.name] = flag(v) if f.type in (bool, "bool") else int(v)
        seed = int(kv.pop("seed", "0"))
        out = kv.pop("out", None)
        threads = int(kv["threads"]) if "threads" in kv else None
        kv.pop("threads", None)
        if kv:
            raise ValueError(f"unknown config key {next(iter(kv))!r}")
        return cls(primes, sizes, specs, Caps(**cap_kw), out, seed, threads)


def case_seed(master_seed: int, index: int) -> int:
    """Per-case seed: first 64-bit word of SeedSequence([master_seed, index])."""
    ss = np.random.SeedSequence([master_seed % (1 << 64), index])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


@dataclass
class SweepSummary:
    rows: int
    min_theorem_ratio: Optional[float]
    max_rudnev_ratio: Optional[Fraction]
    errors: int


@dataclass
class SweepResult:
    rows: List[CaseReport]
    summary: Optional[SweepSummary]

    def to_csv(self) -> str:
        return format_csv(self.rows)


def _run_one(index: int, p: int, size: int, spec_index: int, spec: GenSpec,
             cfg: SweepConfig) -> Tuple[Tuple[int, int, int], CaseReport]:
    seed = spec.seed
    if spec.kind == "random_subset" and seed is None:
        seed = case_seed(cfg.seed, index)
    rep = CaseReport(p=p, size_a=size, gen_kind=str(spec),
                     seed=seed if spec.kind == "random_subset" else None)
    try:
        A = generate_set(replace(spec, seed=seed), size, p)
        rep = run_case(A, p, cfg.caps, gen_kind=rep.gen_kind, seed=rep.seed, threads=1)
    except (ValueError, InvariantViolation) as exc:
        rep.error = f"{type(exc).__name__}: {exc}"
    return (p, size, spec_index), rep


def run_sweep(cfg: SweepConfig, threads: Optional[int] = None) -> SweepResult:
    """One row per (prime, size, spec); errors are recorded in-row."""
    jobs = [(i, p, size, j, spec, cfg) for i, (p, size, (j, spec)) in
            enumerate(itertools.product(cfg.primes, cfg.sizes, enumerate(cfg.specs)))]
    results = ordered_starmap(_run_one, jobs, threads if threads is not None else cfg.threads)
    rows = [rep for _, rep in sorted(results, key=lambda kr: kr[0])]
    if not rows:
        return SweepResult([], None)
    ratios = [r.theorem_ratio for r in rows if r.theorem_ratio is not None]
    rudnev = [r.rudnev_ratio for r in rows if r.rudnev_ratio is not None]
    summary = SweepSummary(
        rows=len(rows),
        min_theorem_ratio=min(ratios) if ratios else None,
        max_rudnev_ratio=max(rudnev) if rudnev else None,
        errors=sum(1 for r in rows if r.error),
    )
    return SweepResult(rows, summary)


def write_csv(rows: Iterable[CaseReport], fh: TextIO) -> None:
    w = csv.DictWriter(fh, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r.as_row())


def format_csv(rows: Iterable[CaseReport]) -> str:
    buf = io.StringIO()
    write_csv(rows, buf)
    return buf.getvalue()


@dataclass
class VerifySummary:
    p: int
    max_size: int
    cases: int
    failures: List[Tuple[int, ...]]
    min_theorem_ratio: Optional[float]
    min_ratio_set: Optional[Tuple[int, ...]]
    symmetry_reduction: bool

    @property
    def ok(self) -> bool:
        return not self.failures


def _affine_canonical(A: Tuple[int, ...], p: int) -> Tuple[int, ...]:
    return min(tuple(sorted((s * a + t) % p for a in A)) for s in range(1, p) for t in range(p))


def exhaustive_verify(p: ModulusLike, max_size: int, force: bool = False,
                      symmetry_reduction: bool = False,
                      threads: Optional[int] = None) -> VerifySummary:
    """Check the averaging inequality on every A in F_p with 1 <= |A| <= max_size.

    With ``symmetry_reduction`` only one representative per orbit of the
    affine maps a -> s a + t is checked; those maps scale every distance by
    s^2, so pinned distance counts are unchanged.
    """
    m = as_modulus(p)
    if not force and (m.p > 13 or max_size > m.p):
        raise CapExceeded(f"exhaustive_verify guard: need p <= 13 and max_size <= p "
                          f"(got p={m.p}, max_size={max_size}); pass force=True to override")
    if max_size < 1:
        raise ValueError("max_size must be at least 1")
    max_size = min(max_size, m.p)

    subsets = [A for k in range(1, max_size + 1) for A in itertools.combinations(range(m.p), k)]
    if symmetry_reduction:
        subsets = [A for A in subsets if _affine_canonical(A, m.p) == A]

    def check(A: Tuple[int, ...]) -> Tuple[Tuple[int, ...], bool, float]:
        E = PointSet2.cartesian(A, m)
        energy, distinct = pin_statistics(E, threads=1)
        N = int(sum(int(e) for e in energy))
        i = int(np.argmin(energy))
        ok = _lemma_holds(int(distinct[i]), N, len(E))
        return A, ok, theorem_ratio(int(distinct.max()), len(A), m.p)

    results = ordered_map(check, subsets, threads)
    failures = [A for A, ok, _ in results if not ok]
    best = min(results, key=lambda r: r[2]) if results else None
    return VerifySummary(
        p=m.p,
        max_size=max_size,
        cases=len(results),
        failures=failures,
        min_theorem_ratio=best[2] if best else None,
        min_ratio_set=best[0] if best else None,
        symmetry_reduction=symmetry_reduction,
    )
