"""Seeded randomized property suite, built for throughput.

The bulk of the evaluations are the dimension-algebra group laws, which
run batched through :mod:`dimcheck.kernels`; the remaining properties
exercise the decimal core and unit conversions in plain Python on smaller
samples.  Everything is deterministic per seed, so a report reproduces
bit-for-bit.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field as dataclass_field

from . import kernels
from .decvalue import DecValue
from .dimension import Dimension
from .measure import (
    DimensionMismatchError,
    Measurement,
    UnitRegistry,
    convert_roundtrip,
    default_registry,
)

__all__ = ["PropertyResult", "SelfTestReport", "run_selftest"]

_MAX_WITNESSES = 3


@dataclass
class PropertyResult:
    name: str
    evaluations: int = 0
    failures: int = 0
    witnesses: list[str] = dataclass_field(default_factory=list)

    def count(self, ok: bool, witness: str = ""):
        self.evaluations += 1
        if not ok:
            self.failures += 1
            if witness and len(self.witnesses) < _MAX_WITNESSES:
                self.witnesses.append(witness)


@dataclass
class SelfTestReport:
    seed: int
    iterations: int
    backend: str
    results: list[PropertyResult]
    elapsed: float

    @property
    def evaluations(self) -> int:
        return sum(r.evaluations for r in self.results)

    @property
    def failures(self) -> int:
        return sum(r.failures for r in self.results)

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def lines(self) -> list[str]:
        out = [
            f"selftest seed={self.seed} iterations={self.iterations} backend={self.backend}"
        ]
        for r in self.results:
            out.append(f"  {r.name:<34} {r.evaluations:>9} evaluations  {r.failures} failures")
            for w in r.witnesses:
                out.append(f"      e.g. {w}")
        verdict = "PASS" if self.ok else "FAIL"
        out.append(
            f"{verdict}: {self.evaluations} evaluations, {self.failures} failures, "
            f"{self.elapsed:.2f}s"
        )
        return out


def _random_decvalue(rng: random.Random, max_digits: int = 12) -> DecValue:
    ndig = rng.randint(1, max_digits)
    sig = rng.randrange(10 ** (ndig - 1), 10 ** ndig)
    if rng.random() < 0.5:
        sig = -sig
    return DecValue.make_float(sig, rng.randint(-12, 12))


def run_selftest(
    iterations: int = 100_000,
    seed: int = 0,
    registry: UnitRegistry | None = None,
) -> SelfTestReport:
    """Run every property; iterations sets the group-law case count.

    Python-level properties run on capped samples so the wall-clock stays
    dominated by the batched kernels.
    """
    start = time.perf_counter()
    reg = registry if registry is not None else default_registry()
    results = [
        _group_laws(iterations, seed),
        _kernel_scalar_agreement(min(iterations, 2000), seed),
        _parse_render_roundtrip(min(iterations, 4000), seed),
        _rational_roundtrip(min(iterations, 4000), seed),
        _compare_oracle(min(iterations, 4000), seed),
        _conversion_roundtrip(min(iterations, 2000), seed, reg),
        _first_unit_and_guards(min(iterations, 2000), seed, reg),
    ]
    elapsed = time.perf_counter() - start
    return SelfTestReport(seed, iterations, kernels.backend(), results, elapsed)


def _group_laws(cases: int, seed: int) -> PropertyResult:
    kernels.warmup()
    report = kernels.run_group_law_suite(cases, seed)
    result = PropertyResult("dimension_group_laws")
    result.evaluations = report["evaluations"]
    for law in kernels.LAW_NAMES:
        if report[law]:
            result.failures += report[law]
            result.witnesses.append(f"{law}: {report[law]} failing cases")
    return result


def _kernel_scalar_agreement(cases: int, seed: int) -> PropertyResult:
    result = PropertyResult("kernel_scalar_agreement")
    a = kernels.random_exponents(cases, seed + 10)
    b = kernels.random_exponents(cases, seed + 11)
    ab = kernels.combine(a, b)
    quot = kernels.divide(a, b)
    cubed = kernels.power(a, 3)
    for i in range(cases):
        da = Dimension(tuple(int(x) for x in a[i]))
        db = Dimension(tuple(int(x) for x in b[i]))
        result.count((da * db).exponents == tuple(int(x) for x in ab[i]), f"mul row {i}")
        result.count((da / db).exponents == tuple(int(x) for x in quot[i]), f"div row {i}")
        result.count((da ** 3).exponents == tuple(int(x) for x in cubed[i]), f"pow row {i}")
    return result


def _parse_render_roundtrip(cases: int, seed: int) -> PropertyResult:
    result = PropertyResult("decimal_parse_render_roundtrip")
    rng = random.Random(seed + 20)
    for _ in range(cases):
        a = _random_decvalue(rng)
        result.count(DecValue.parse(str(a)) == a, f"value {a}")
    return result


def _rational_roundtrip(cases: int, seed: int) -> PropertyResult:
    result = PropertyResult("decimal_rational_roundtrip")
    rng = random.Random(seed + 30)
    for _ in range(cases):
        a = _random_decvalue(rng)
        result.count(DecValue.from_rational(a.to_rational()) == a, f"value {a}")
    return result


def _compare_oracle(cases: int, seed: int) -> PropertyResult:
    result = PropertyResult("decimal_compare_oracle")
    rng = random.Random(seed + 40)
    for _ in range(cases):
        a = _random_decvalue(rng)
        b = _random_decvalue(rng)
        ra, rb = a.to_rational(), b.to_rational()
        oracle = -1 if ra < rb else (0 if ra == rb else 1)
        result.count(a.compare(b) == oracle and b.compare(a) == -oracle, f"{a} vs {b}")
    return result


def _conversion_pairs(reg: UnitRegistry):
    by_dim: dict = {}
    for unit in reg.units():
        by_dim.setdefault(unit.dimension, []).append(unit)
    return [units for units in by_dim.values() if len(units) > 1]


def _conversion_roundtrip(cases: int, seed: int, reg: UnitRegistry) -> PropertyResult:
    result = PropertyResult("conversion_roundtrip_ulp")
    rng = random.Random(seed + 50)
    classes = _conversion_pairs(reg)
    if not classes:
        return result
    for _ in range(cases):
        units = rng.choice(classes)
        ua, ub = rng.sample(units, 2)
        m = Measurement(_random_decvalue(rng), ua)
        back, tol = convert_roundtrip(m, ub)
        diff = abs(back.value.to_rational() - m.value.to_rational())
        result.count(
            diff <= tol,
            f"{m.value} {ua.name} -> {ub.name} -> {back.value} {ua.name}",
        )
    return result


def _first_unit_and_guards(cases: int, seed: int, reg: UnitRegistry) -> PropertyResult:
    result = PropertyResult("first_unit_rule_and_guards")
    rng = random.Random(seed + 60)
    units = reg.units()
    for _ in range(cases):
        ua, ub = rng.choice(units), rng.choice(units)
        a = Measurement(_random_decvalue(rng), ua)
        b = Measurement(_random_decvalue(rng), ub)
        if ua.dimension == ub.dimension:
            result.count(a.add(b).unit == ua, f"sum unit for {ua.name}+{ub.name}")
        else:
            try:
                a.add(b)
                result.count(False, f"{ua.name}+{ub.name} accepted")
            except DimensionMismatchError:
                result.count(True)
    return result
