"""End-to-end experiment pipelines with deterministic CSV/JSON reports.

An experiment takes a triangular map and runs one of four modes:

  first_case      strictly decreasing diagonal degrees: dynamical degree,
                  sector construction, stability and dominant-monomial
                  verification, height sequences with the lower
                  canonical-height floor, orbit disjointness and the
                  density proxy;
  second_case_n2  N = 2 with d11 <= d22: exact second-coordinate valuation
                  growth plus height estimates;
  product         the block product of two maps: degree max-rule and
                  height additivity;
  iterate_check   consistency of degrees and heights under symbolic
                  iteration.

Identical configs (same seed) produce byte-identical outputs.  Every check
in the summary names the mathematical statement it instantiates.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from . import degrees as deg
from . import heights as hts
from . import padic
from .density import density_check, density_report_csv
from .maps import (
    DEFAULT_CAPS,
    ResourceCaps,
    TriangularMap,
    as_point,
    iterate_symbolic,
    map_from_json_dict,
    map_to_json_dict,
    orbit,
    orbit_to_csv,
    orbits_disjoint_prefix,
)
from .qpoly import ResourceLimitError

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_ASSERTION_FAILED = 2
EXIT_RESOURCE = 3
EXIT_CONFIG = 4

MODES = ("first_case", "second_case_n2", "product", "iterate_check")

ALPHA_UPPER_MARGIN = 0.05
KHAT_FLOAT_MARGIN = 1e-9


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    map: dict  # wire format: {"dimension": N, "components": [...]}
    mode: str = "first_case"
    map_b: dict | None = None  # second factor, product mode only
    point: list | None = None  # rational strings, modes that track one orbit
    prime: int | None = None
    c_constant: int | None = None
    n_max: int = 8
    samples: int = 12
    seed: int = 0
    density_degree: int = 2
    degree_sequence_depth: int = 4
    iterate_power: int = 2
    out_dir: str | None = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"unknown mode {self.mode!r}; expected one of {MODES}")
        if self.n_max < 1:
            raise ConfigError("n_max must be >= 1")
        if self.samples < 1:
            raise ConfigError("samples must be >= 1")
        if self.density_degree < 1:
            raise ConfigError("density_degree must be >= 1")

    @classmethod
    def from_json_file(cls, path) -> "ExperimentConfig":
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(doc) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        return cls(**doc)


@dataclass
class Check:
    name: str
    statement: str
    passed: bool
    details: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "statement": self.statement,
            "passed": self.passed,
            "details": self.details,
        }


@dataclass
class ExperimentResult:
    summary: dict
    files: list
    exit_code: int


def _parse_map(doc: dict) -> TriangularMap:
    try:
        return map_from_json_dict(doc)
    except (KeyError, TypeError) as err:
        raise ConfigError(f"bad map description: {err}") from err


def _write(out_dir: Path, name: str, text: str, files: list) -> None:
    path = out_dir / name
    path.write_text(text, encoding="utf-8")
    files.append(str(path))


def _finish(cfg: ExperimentConfig, out_dir: Path, checks: list, extra: dict, files: list) -> ExperimentResult:
    all_pass = all(c.passed for c in checks)
    summary = {
        "schema_version": SCHEMA_VERSION,
        "mode": cfg.mode,
        "seed": cfg.seed,
        "all_passed": all_pass,
        "checks": [c.as_dict() for c in checks],
    }
    summary.update(extra)
    _write(out_dir, "summary.json", json.dumps(summary, indent=2, sort_keys=True) + "\n", files)
    return ExperimentResult(
        summary=summary,
        files=files,
        exit_code=EXIT_OK if all_pass else EXIT_ASSERTION_FAILED,
    )


def run_experiment(
    cfg: ExperimentConfig, out_dir, caps: ResourceCaps = DEFAULT_CAPS
) -> ExperimentResult:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    f = _parse_map(cfg.map)
    if cfg.mode == "first_case":
        return _run_first_case(cfg, f, out_dir, caps)
    if cfg.mode == "second_case_n2":
        return _run_second_case(cfg, f, out_dir, caps)
    if cfg.mode == "product":
        return _run_product(cfg, f, out_dir, caps)
    return _run_iterate_check(cfg, f, out_dir, caps)


# -- mode pipelines ----------------------------------------------------


def _degree_stage(cfg: ExperimentConfig, f: TriangularMap, out_dir: Path, checks, files, caps):
    delta = deg.dynamical_degree_exact(f)
    seq = deg.dynamical_degree_sequence(f, n_max=cfg.degree_sequence_depth, caps=caps)
    _write(out_dir, "degrees.csv", seq.to_csv(), files)
    checks.append(
        Check(
            name="degree_roots_above_exact",
            statement="deg(f^n)^(1/n) >= max diagonal degree for every computed n",
            passed=all(d >= delta**n for n, d, _ in seq.values),
            details={"delta_exact": delta, "rows": [[n, d, r] for n, d, r in seq.values]},
        )
    )
    return delta, seq


def _alpha_upper_check(seqs: list, delta: int, n_min: int = 5) -> Check:
    worst = None
    for seq in seqs:
        for row in seq.rows:
            if row.n >= n_min and row.root is not None:
                if worst is None or row.root > worst:
                    worst = row.root
    passed = worst is not None and worst <= delta + ALPHA_UPPER_MARGIN
    return Check(
        name="alpha_upper_proxy",
        statement=(
            f"max of h+(f^n P)^(1/n) over n >= {n_min} stays within "
            f"{ALPHA_UPPER_MARGIN} above the exact dynamical degree"
        ),
        passed=bool(passed),
        details={"max_root": worst, "delta_exact": delta},
    )


def _run_first_case(cfg: ExperimentConfig, f: TriangularMap, out_dir: Path, caps) -> ExperimentResult:
    checks: list = []
    files: list = []
    diag = deg.degree_matrix(f).diagonal()
    if any(diag[i] <= diag[i + 1] for i in range(len(diag) - 1)):
        raise ConfigError(
            f"first_case requires strictly decreasing diagonal degrees, got {diag}"
        )
    delta, _ = _degree_stage(cfg, f, out_dir, checks, files, caps)

    sector = padic.sector_config(f, prime=cfg.prime, C=cfg.c_constant)
    samples = padic.sample_U(sector, cfg.samples, cfg.seed)
    _write(
        out_dir,
        "sector.csv",
        padic.sector_report_csv(f, sector, samples, n_max=min(cfg.n_max, 4)),
        files,
    )

    stability = padic.verify_stability(f, sector, samples)
    checks.append(
        Check(
            name="sector_stability",
            statement=(
                "for every sample P in U: f(P) in U and the first image "
                "coordinate is p-adically largest"
            ),
            passed=stability.all_ok,
            details={"prime": sector.prime, "C": sector.C, "samples": len(samples)},
        )
    )
    dominant_ok = all(
        padic.verify_dominant_value(f, sector, p).all_ok for p in samples
    )
    checks.append(
        Check(
            name="dominant_monomial_valuation",
            statement=(
                "v(x_i of f(P)) = d_ii*v(x_i) + sum_l e_il*v(x_l) exactly "
                "for every sample and component"
            ),
            passed=dominant_ok,
            details={},
        )
    )

    d11 = diag[0]
    log_p = math.log(sector.prime)
    khat_ok = True
    floor_ok = True
    seqs = []
    for idx, point in enumerate(samples):
        seq = hts.height_sequence(f, point, cfg.n_max, delta=delta, caps=caps)
        seqs.append(seq)
        if idx == 0:
            _write(out_dir, "heights_sample0.csv", seq.to_csv(), files)
        e1 = -padic.vp(point[0], sector.prime)
        current = point
        for n in range(1, cfg.n_max + 1):
            current = f.apply(current)
            if -padic.vp(current[0], sector.prime) < d11**n * e1:
                floor_ok = False
        for row in seq.rows:
            if row.khat < e1 * log_p - KHAT_FLOAT_MARGIN:
                khat_ok = False
    checks.append(
        Check(
            name="height_growth_floor",
            statement="-v_p(x_1 of f^n(P)) >= d_11^n * (-v_p(x_1 of P)) for all computed n",
            passed=floor_ok,
            details={"n_max": cfg.n_max},
        )
    )
    checks.append(
        Check(
            name="lower_canonical_height_positive",
            statement="delta^(-n) * h+(f^n P) >= (-v_p x_1) * log p for all computed n",
            passed=khat_ok,
            details={"margin": KHAT_FLOAT_MARGIN},
        )
    )
    checks.append(_alpha_upper_check(seqs, delta))

    witness = padic.u_minus_fu_witness(f, sector)
    checks.append(
        Check(
            name="sector_not_surjective_witness",
            statement=(
                "a sector point exists whose first-coordinate exponent is below "
                "the minimum achievable by one application of the map"
            ),
            passed=padic.in_U(witness, sector),
            details={
                "witness": [str(c) for c in witness],
                "image_floor": padic.image_first_exponent_floor(f, sector),
            },
        )
    )

    prefix = 5
    orbits = [orbit(f, p, prefix, caps) for p in samples]
    disjoint = all(
        orbits_disjoint_prefix(orbits[i], orbits[j])
        for i in range(len(orbits))
        for j in range(i + 1, len(orbits))
    )
    checks.append(
        Check(
            name="pairwise_orbit_disjointness",
            statement=f"all pairwise orbit prefixes of length {prefix + 1} are disjoint",
            passed=disjoint,
            details={"prefix": prefix},
        )
    )
    signatures = [padic.valuation_signature(p, sector) for p in samples]
    checks.append(
        Check(
            name="distinct_valuation_signatures",
            statement="sampled points carry pairwise distinct valuation signatures",
            passed=len(set(signatures)) == len(signatures),
            details={},
        )
    )

    density = density_check(samples, cfg.density_degree)
    _write(out_dir, "density.csv", density_report_csv(density), files)
    checks.append(
        Check(
            name="density_proxy",
            statement=(
                f"no nonzero polynomial of total degree <= {cfg.density_degree} "
                "vanishes on all sampled points"
            ),
            passed=density.dense,
            details={
                "rank": density.rank,
                "monomial_count": density.monomial_count,
                "point_count": density.point_count,
                "verdict": density.verdict,
            },
        )
    )
    _write(out_dir, "orbit_sample0.csv", orbit_to_csv(orbits[0]), files)

    extra = {
        "map": map_to_json_dict(f),
        "delta_exact": delta,
        "prime": sector.prime,
        "C": sector.C,
    }
    return _finish(cfg, out_dir, checks, extra, files)


def _run_second_case(cfg: ExperimentConfig, f: TriangularMap, out_dir: Path, caps) -> ExperimentResult:
    checks: list = []
    files: list = []
    if f.dimension != 2:
        raise ConfigError("second_case_n2 requires a two-variable map")
    diag = deg.degree_matrix(f).diagonal()
    if diag[0] > diag[1]:
        raise ConfigError("second_case_n2 requires d11 <= d22")
    delta, _ = _degree_stage(cfg, f, out_dir, checks, files, caps)

    sector = padic.sector_config(f, prime=cfg.prime, C=cfg.c_constant)
    if cfg.point is not None:
        point = as_point(cfg.point)
    else:
        # Default start: x1 = 1, x2 a unit over p so that |x2|_p > 1.
        sample = padic.sample_U(sector, 1, cfg.seed)[0]
        point = as_point([1, sample[-1]])
    growth = padic.case_n2_growth(f, sector, point, cfg.n_max)
    _write(
        out_dir,
        "growth.csv",
        "n,v_x2,expected,equal\n"
        + "".join(
            f"{r.n},{r.valuation},{r.expected},{str(r.equal).lower()}\n"
            for r in growth.rows
        ),
        files,
    )
    checks.append(
        Check(
            name="second_coordinate_valuation_growth",
            statement="v_p(x_2 of f^n P) = d_22^n * v_p(x_2 of P) exactly, and |x_2|_p > 1 is preserved",
            passed=growth.all_ok,
            details={"rows": [[r.n, r.valuation, r.expected] for r in growth.rows]},
        )
    )

    seq = hts.height_sequence(f, point, cfg.n_max, delta=delta, caps=caps)
    _write(out_dir, "heights.csv", seq.to_csv(), files)
    checks.append(_alpha_upper_check([seq], delta))

    extra = {
        "map": map_to_json_dict(f),
        "delta_exact": delta,
        "prime": sector.prime,
        "point": [str(c) for c in point],
    }
    return _finish(cfg, out_dir, checks, extra, files)


def _run_product(cfg: ExperimentConfig, f: TriangularMap, out_dir: Path, caps) -> ExperimentResult:
    checks: list = []
    files: list = []
    if cfg.map_b is None:
        raise ConfigError("product mode needs map_b")
    g = _parse_map(cfg.map_b)
    expected, report = deg.product_dynamical_degree(f, g)
    checks.append(
        Check(
            name="product_degree_max_rule",
            statement="the dynamical degree of the block product equals the max of the factors'",
            passed=report.consistent,
            details={
                "delta_f": report.delta_f,
                "delta_g": report.delta_g,
                "delta_product": report.delta_product,
            },
        )
    )

    if cfg.point is not None:
        point = as_point(cfg.point)
        if len(point) != f.dimension + g.dimension:
            raise ConfigError("product point must have N_f + N_g coordinates")
        p_a, p_b = point[: f.dimension], point[f.dimension :]
        additivity = hts.product_height_additivity(f, p_a, g, p_b, cfg.n_max, caps)
        additive_ok = additivity.projections_match
        checks.append(
            Check(
                name="product_height_additivity",
                statement=(
                    "the product orbit projects exactly onto the factor orbits; the "
                    "summed height's exact argument is the product of the factors'"
                ),
                passed=additive_ok,
                details={
                    "alpha_a": additivity.alpha_a,
                    "alpha_b": additivity.alpha_b,
                    "expected_limit": additivity.expected_limit,
                    "last_root": additivity.last_root,
                },
            )
        )
        _write(
            out_dir,
            "product_heights.csv",
            "n,arg_a_bits,arg_b_bits,h_sum,root\n"
            + "".join(
                f"{r.n},{r.arg_a.bit_length()},{r.arg_b.bit_length()},{r.h_sum!r},"
                f"{'' if r.root is None else repr(r.root)}\n"
                for r in additivity.rows
            ),
            files,
        )

    extra = {
        "map": map_to_json_dict(f),
        "map_b": map_to_json_dict(g),
        "delta_exact": expected,
    }
    return _finish(cfg, out_dir, checks, extra, files)


def iterate_consistency(
    f: TriangularMap,
    point: Sequence,
    t: int,
    n_max: int,
    caps: ResourceCaps = DEFAULT_CAPS,
) -> dict:
    """delta(f^t) = delta(f)^t and exact height-row equality h+((f^t)^n P) = h+(f^(tn) P)."""
    if t < 1:
        raise ValueError("t must be >= 1")
    point = as_point(point)
    delta = deg.dynamical_degree_exact(f)
    f_t = iterate_symbolic(f, t, caps)
    delta_t = deg.dynamical_degree_exact(f_t)
    degree_ok = delta_t == delta**t

    orb_fast = orbit(f_t, point, n_max, caps)
    orb_slow = orbit(f, point, n_max * t, caps)
    rows = []
    heights_ok = True
    for n in range(n_max + 1):
        arg_fast = hts.affine_height(orb_fast.points[n]).max_abs
        arg_slow = hts.affine_height(orb_slow.points[n * t]).max_abs
        equal = arg_fast == arg_slow and orb_fast.points[n] == orb_slow.points[n * t]
        heights_ok = heights_ok and equal
        rows.append({"n": n, "height_arg_bits": arg_fast.bit_length(), "equal": equal})
    return {
        "t": t,
        "delta": delta,
        "delta_iterate": delta_t,
        "degree_ok": degree_ok,
        "heights_ok": heights_ok,
        "rows": rows,
        "all_ok": degree_ok and heights_ok,
    }


def _run_iterate_check(cfg: ExperimentConfig, f: TriangularMap, out_dir: Path, caps) -> ExperimentResult:
    checks: list = []
    files: list = []
    if cfg.point is None:
        raise ConfigError("iterate_check mode needs a point")
    if cfg.iterate_power > 3:
        raise ConfigError("iterate_power is capped at 3")
    report = iterate_consistency(f, cfg.point, cfg.iterate_power, cfg.n_max, caps)
    checks.append(
        Check(
            name="iterate_degree_power_law",
            statement="the dynamical degree of the t-fold iterate is the t-th power of the original",
            passed=report["degree_ok"],
            details={"t": report["t"], "delta": report["delta"], "delta_iterate": report["delta_iterate"]},
        )
    )
    checks.append(
        Check(
            name="iterate_height_rows_match",
            statement="height arguments of (f^t)^n(P) and f^(tn)(P) agree exactly row for row",
            passed=report["heights_ok"],
            details={"rows": report["rows"]},
        )
    )
    extra = {"map": map_to_json_dict(f), "delta_exact": report["delta"]}
    return _finish(cfg, out_dir, checks, extra, files)
