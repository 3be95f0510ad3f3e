"""Order/bill/pay/serve settlement engine with time-varying exchange rates.

Services are ordered by customers, billed once each in some currency,
paid (which snapshots the conversion from the bill currency into the
customer's currency at the current clock), and finally served.  Event
guards keep the state inside the workflow invariants; an independent
:meth:`Engine.check_invariants` re-verifies the invariant subset from
scratch so that tampered or hand-built states are caught.

Money is deliberately not a dimension-vector quantity: currencies form
their own little conversion system with a reference code (star topology,
like canonical units) and their own mismatch error.

The engine is a single-owner mutable state machine; apply events
sequentially.  Bills, money, and rate snapshots are immutable values and
safe to share once handed out.
"""

from __future__ import annotations

import random
from bisect import bisect_right, insort
from dataclasses import dataclass, replace
from fractions import Fraction

from .decvalue import DecValue, PrecisionContext
from .measure import as_fraction

__all__ = [
    "Money",
    "RateSnapshot",
    "RateTable",
    "Bill",
    "Engine",
    "Violation",
    "engine_new",
    "event_order",
    "event_bill",
    "event_pay",
    "event_serve",
    "advance_clock",
    "set_rate",
    "check_invariants",
    "run_scenario",
    "random_engine",
    "run_random_trace",
    "ScenarioResult",
    "CurrencyError",
    "GuardFailedError",
    "ClockRegressionError",
    "InvalidRateError",
    "IncompleteTariffError",
    "CurrencyMismatchError",
    "ScenarioError",
]


class CurrencyError(ValueError):
    pass


class GuardFailedError(CurrencyError):
    """An event's precondition does not hold in the current state."""


class ClockRegressionError(CurrencyError):
    pass


class InvalidRateError(CurrencyError):
    pass


class IncompleteTariffError(CurrencyError):
    pass


class CurrencyMismatchError(CurrencyError):
    """Arithmetic on amounts in different currency codes without conversion."""


class ScenarioError(CurrencyError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class Money:
    amount: DecValue
    code: str

    def add(self, other: "Money", ctx: PrecisionContext | None = None) -> "Money":
        if self.code != other.code:
            raise CurrencyMismatchError(f"cannot add {other.code} to {self.code}")
        return Money(self.amount.add(other.amount, ctx), self.code)

    def __str__(self):
        return f"{self.amount} {self.code}"


@dataclass(frozen=True)
class RateSnapshot:
    """A conversion frozen at pay time: multiply by num/den, relabel the code.

    Stored as concrete integers rather than a closure so that states
    replay and compare deterministically.
    """

    src: str
    dst: str
    num: int
    den: int

    @classmethod
    def of(cls, src: str, dst: str, factor: Fraction) -> "RateSnapshot":
        return cls(src, dst, factor.numerator, factor.denominator)

    @property
    def factor(self) -> Fraction:
        return Fraction(self.num, self.den)

    def apply(self, money: Money, ctx: PrecisionContext | None = None) -> Money:
        if money.code != self.src:
            raise CurrencyMismatchError(
                f"snapshot converts {self.src}, got {money.code}"
            )
        v = money.amount.to_rational() * self.factor
        return Money(DecValue.from_rational(v, ctx), self.dst)


class RateTable:
    """Per-code step functions date -> rate-to-reference, always positive.

    ``rate(d, code)`` is the most recently set value at or before d; every
    registered code has an initial value, so lookups are total.
    """

    def __init__(self, reference: str, initial: dict):
        self.reference = reference
        self._dates: dict[str, list[int]] = {}
        self._values: dict[str, dict[int, Fraction]] = {}
        initial = dict(initial)
        initial.setdefault(reference, Fraction(1))
        for code, value in initial.items():
            value = as_fraction(value)
            if value <= 0:
                raise InvalidRateError(f"rate for {code} must be positive")
            self._dates[code] = [0]
            self._values[code] = {0: value}

    def codes(self):
        return set(self._dates)

    def set(self, date: int, code: str, value) -> None:
        if code not in self._dates:
            raise InvalidRateError(f"unknown currency code: {code!r}")
        value = as_fraction(value)
        if value <= 0:
            raise InvalidRateError(f"rate for {code} must be positive")
        if date not in self._values[code]:
            insort(self._dates[code], date)
        self._values[code][date] = value

    def rate(self, date: int, code: str) -> Fraction:
        try:
            dates = self._dates[code]
        except KeyError:
            raise InvalidRateError(f"unknown currency code: {code!r}") from None
        i = bisect_right(dates, date)
        return self._values[code][dates[max(i - 1, 0)]]

    def factor(self, date: int, src: str, dst: str) -> Fraction:
        return self.rate(date, src) / self.rate(date, dst)


@dataclass(frozen=True)
class Bill:
    """One bill per service.  date/t/npay are set together at pay time."""

    id: int
    val: Money
    cust: str
    prov: str
    ser: str
    date: int | None = None
    t: RateSnapshot | None = None
    npay: Money | None = None

    @property
    def paid(self) -> bool:
        return self.date is not None


@dataclass(frozen=True)
class Violation:
    invariant: str
    witness: str

    def __str__(self):
        return f"{self.invariant}: {self.witness}"


class Engine:
    """The settlement state machine.

    Invariant names reported by :meth:`check_invariants`:
      inv3   every billing pair was ordered
      inv4   every payment pair was billed
      inv5   every delivery pair was paid
      inv10..inv13  every bill carries value/customer/provider/service
      ser_injective no two bills share a service
      inv14  tariff is total on the service set
      inv20  paid bills record the billed value unchanged
      inv21a cpay maps known (customer, service) pairs; pay date implies amount
      inv21b/inv23/inv24  pay date, snapshot, and recorded amount set together
      inv22  recorded customer payment equals the snapshot applied to the bill
    """

    def __init__(self, customers, providers, services, service_provider_map, tariff, rates: RateTable):
        if isinstance(customers, dict):
            self.customers = dict(customers)
        else:
            self.customers = {c: rates.reference for c in customers}
        self.providers = set(providers)
        self.services = set(services)
        self.provider_of = dict(service_provider_map)
        self.rates = rates
        known = rates.codes()
        for c, code in self.customers.items():
            if code not in known:
                raise InvalidRateError(f"customer {c!r}: no rates for code {code!r}")
        for s in self.services:
            if s not in self.provider_of:
                raise CurrencyError(f"service {s!r} has no provider")
            if self.provider_of[s] not in self.providers:
                raise CurrencyError(f"service {s!r}: unknown provider {self.provider_of[s]!r}")
        self.tariff: dict[str, Money] = dict(tariff)
        for s in self.services:
            if s not in self.tariff:
                raise IncompleteTariffError(f"no tariff for service {s!r}")
        for s, money in self.tariff.items():
            if money.code not in known:
                raise InvalidRateError(f"tariff for {s!r}: no rates for code {money.code!r}")
        self.clock = 0
        self.order_pairs: list[tuple[str, str]] = []
        self._order_set: set[tuple[str, str]] = set()
        self.billing: dict[str, str] = {}
        self.pay: dict[str, str] = {}
        self.deliver: dict[str, str] = {}
        self.bills: dict[int, Bill] = {}
        self.cpay: dict[tuple[str, str], Money] = {}
        self._next_bill_id = 1
        self._inv22_cache: dict[tuple, Money] = {}

    # -- events ----------------------------------------------------------

    def order(self, customer: str, service: str) -> None:
        if customer not in self.customers:
            raise GuardFailedError(f"order: unknown customer {customer!r}")
        if service not in self.services:
            raise GuardFailedError(f"order: unknown service {service!r}")
        pair = (service, customer)
        if pair in self._order_set:
            raise GuardFailedError(f"order: {customer!r} already ordered {service!r}")
        self._order_set.add(pair)
        self.order_pairs.append(pair)

    def bill(self, service: str, code: str) -> Bill:
        if service not in self.services:
            raise GuardFailedError(f"bill: unknown service {service!r}")
        if code not in self.rates.codes():
            raise GuardFailedError(f"bill: unknown currency code {code!r}")
        if service in self.billing:
            raise GuardFailedError(f"bill: service {service!r} already billed")
        customer = next((c for s, c in self.order_pairs if s == service), None)
        if customer is None:
            raise GuardFailedError(f"bill: service {service!r} was never ordered")
        tariff = self.tariff[service]
        factor = self.rates.factor(self.clock, tariff.code, code)
        amount = DecValue.from_rational(tariff.amount.to_rational() * factor)
        bill = Bill(self._next_bill_id, Money(amount, code), customer, self.provider_of[service], service)
        self._next_bill_id += 1
        self.bills[bill.id] = bill
        self.billing[service] = customer
        return bill

    def pay_bill(self, bill_id: int) -> Bill:
        bill = self.bills.get(bill_id)
        if bill is None:
            raise GuardFailedError(f"pay: no bill {bill_id!r}")
        if bill.paid:
            raise GuardFailedError(f"pay: bill {bill_id!r} already paid")
        customer_code = self.customers[bill.cust]
        snapshot = RateSnapshot.of(
            bill.val.code,
            customer_code,
            self.rates.factor(self.clock, bill.val.code, customer_code),
        )
        paid = replace(bill, date=self.clock, t=snapshot, npay=bill.val)
        self.bills[bill_id] = paid
        self.pay[bill.ser] = bill.cust
        self.cpay[(bill.cust, bill.ser)] = snapshot.apply(bill.val)
        return paid

    def serve(self, service: str) -> None:
        if service not in self.pay:
            raise GuardFailedError(f"serve: service {service!r} not paid")
        if service in self.deliver:
            raise GuardFailedError(f"serve: service {service!r} already delivered")
        self.deliver[service] = self.pay[service]

    def advance_clock(self, date: int) -> None:
        if date < self.clock:
            raise ClockRegressionError(f"clock {self.clock} cannot move back to {date}")
        self.clock = date

    def set_rate(self, date: int, code: str, value) -> None:
        self.rates.set(date, code, value)

    # -- independent invariant check -------------------------------------

    def check_invariants(self) -> list[Violation]:
        out: list[Violation] = []
        for s, c in self.billing.items():
            if (s, c) not in self._order_set:
                out.append(Violation("inv3", f"billing pair ({s!r}, {c!r}) was never ordered"))
        for s, c in self.pay.items():
            if self.billing.get(s) != c:
                out.append(Violation("inv4", f"payment pair ({s!r}, {c!r}) was never billed"))
        for s, c in self.deliver.items():
            if self.pay.get(s) != c:
                out.append(Violation("inv5", f"delivery pair ({s!r}, {c!r}) was never paid"))
        for s in self.services:
            if s not in self.tariff:
                out.append(Violation("inv14", f"no tariff for service {s!r}"))
        for s in self.tariff:
            if s not in self.services:
                out.append(Violation("inv14", f"tariff for unknown service {s!r}"))
        for c, s in self.cpay:
            if c not in self.customers or s not in self.services:
                out.append(Violation("inv21a", f"cpay entry for unknown pair ({c!r}, {s!r})"))
        cache = self._inv22_cache
        seen_services: dict[str, int] = {}
        for bid, b in self.bills.items():
            if b.val is None:
                out.append(Violation("inv10", f"bill {bid} has no value"))
            if b.cust is None:
                out.append(Violation("inv11", f"bill {bid} has no customer"))
            if b.prov is None:
                out.append(Violation("inv12", f"bill {bid} has no provider"))
            if b.ser is None:
                out.append(Violation("inv13", f"bill {bid} has no service"))
            elif b.ser in seen_services:
                out.append(
                    Violation("ser_injective", f"bills {seen_services[b.ser]} and {bid} share service {b.ser!r}")
                )
            else:
                seen_services[b.ser] = bid
            has_date = b.date is not None
            has_t = b.t is not None
            has_npay = b.npay is not None
            if has_t != has_date:
                out.append(Violation("inv23", f"bill {bid}: snapshot and pay date disagree"))
            if has_npay != has_t:
                out.append(Violation("inv24", f"bill {bid}: recorded amount and snapshot disagree"))
            if has_npay != has_date:
                out.append(Violation("inv21a", f"bill {bid}: recorded amount and pay date disagree"))
            if not (has_date and has_t and has_npay):
                continue
            if b.npay != b.val:
                out.append(Violation("inv20", f"bill {bid}: recorded amount differs from billed value"))
            if b.val is None or b.cust is None or b.ser is None:
                continue
            key = (
                bid,
                b.t.num,
                b.t.den,
                b.t.src,
                b.t.dst,
                b.val.amount.significand,
                b.val.amount.exponent,
                b.val.code,
            )
            expected = cache.get(key)
            if expected is None:
                expected = b.t.apply(b.val)
                cache[key] = expected
            actual = self.cpay.get((b.cust, b.ser))
            if actual != expected:
                out.append(
                    Violation(
                        "inv22",
                        f"bill {bid}: customer payment {actual} != snapshot conversion {expected}",
                    )
                )
        return out

    def digest(self) -> str:
        paid = sum(1 for b in self.bills.values() if b.paid)
        return (
            f"clock={self.clock} orders={len(self.order_pairs)} bills={len(self.bills)} "
            f"paid={paid} served={len(self.deliver)}"
        )


# Thin functional facade matching the operation-style naming used elsewhere.

def engine_new(customers, providers, services, service_provider_map, tariff, rates: RateTable) -> Engine:
    return Engine(customers, providers, services, service_provider_map, tariff, rates)


def event_order(engine: Engine, customer: str, service: str) -> Engine:
    engine.order(customer, service)
    return engine


def event_bill(engine: Engine, service: str, code: str) -> tuple[Engine, Bill]:
    return engine, engine.bill(service, code)


def event_pay(engine: Engine, bill_id: int) -> Engine:
    engine.pay_bill(bill_id)
    return engine


def event_serve(engine: Engine, service: str) -> Engine:
    engine.serve(service)
    return engine


def advance_clock(engine: Engine, date: int) -> Engine:
    engine.advance_clock(date)
    return engine


def set_rate(engine: Engine, date: int, code: str, value) -> Engine:
    engine.set_rate(date, code, value)
    return engine


def check_invariants(engine: Engine) -> list[Violation]:
    return engine.check_invariants()


# -- scenario files -------------------------------------------------------

_SETUP_KEYWORDS = ("reference", "customer", "provider", "service")
_EVENT_KEYWORDS = ("clock", "rate", "order", "bill", "pay", "serve")


@dataclass
class ScenarioResult:
    events: int
    guard_failures: list[str]
    violations: list[str]
    trace: list[str]
    engine: Engine | None

    @property
    def ok(self) -> bool:
        return not self.guard_failures and not self.violations


def _default_world() -> tuple:
    customers = {"c1": "REF", "c2": "REF", "c3": "REF"}
    providers = {"p1", "p2"}
    services = {"s1", "s2", "s3", "s4"}
    provider_of = {"s1": "p1", "s2": "p1", "s3": "p2", "s4": "p2"}
    tariff = {s: Money(DecValue.from_int(100), "REF") for s in services}
    return customers, providers, services, provider_of, tariff, "REF"


def run_scenario(text: str, trace: bool = False) -> ScenarioResult:
    """Parse and execute a scenario file.

    Setup lines (``reference``/``customer``/``provider``/``service``) must
    precede all event lines; files with no setup lines run against a small
    built-in world.  Execution continues past guard failures; every event
    line is followed by a full invariant check.
    """
    reference: str | None = None
    customers: dict[str, str] = {}
    providers: set[str] = set()
    services: set[str] = set()
    provider_of: dict[str, str] = {}
    tariff: dict[str, Money] = {}
    early_rates: list[tuple[int, str, Fraction]] = []

    engine: Engine | None = None
    result = ScenarioResult(0, [], [], [], None)

    def build() -> Engine:
        nonlocal customers, providers, services, provider_of, tariff, reference
        if not (customers or providers or services):
            customers, providers, services, provider_of, tariff, reference = _default_world()
        ref = reference or "REF"
        codes = {ref}
        codes.update(customers.values())
        codes.update(m.code for m in tariff.values())
        codes.update(code for _, code, _ in early_rates)
        table = RateTable(ref, {code: Fraction(1) for code in codes})
        for date, code, value in early_rates:
            table.set(date, code, value)
        return Engine(customers, providers, services, provider_of, tariff, table)

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        keyword = tokens[0]
        try:
            if keyword in _SETUP_KEYWORDS:
                if engine is not None:
                    raise ScenarioError("setup lines must precede events", lineno)
                if keyword == "reference" and len(tokens) == 2:
                    reference = tokens[1]
                elif keyword == "customer" and len(tokens) == 3:
                    customers[tokens[1]] = tokens[2]
                elif keyword == "provider" and len(tokens) == 2:
                    providers.add(tokens[1])
                elif keyword == "service" and len(tokens) == 5:
                    services.add(tokens[1])
                    provider_of[tokens[1]] = tokens[2]
                    tariff[tokens[1]] = Money(DecValue.parse(tokens[3]), tokens[4])
                else:
                    raise ScenarioError(f"malformed {keyword} line", lineno)
                continue
            if keyword not in _EVENT_KEYWORDS:
                raise ScenarioError(f"unknown directive {keyword!r}", lineno)
            if keyword == "rate" and engine is None:
                if len(tokens) != 4:
                    raise ScenarioError("expected: rate <date> <code> <p/q>", lineno)
                early_rates.append((int(tokens[1]), tokens[2], as_fraction(tokens[3])))
                continue
            if engine is None:
                engine = build()
                result.engine = engine
            note = _apply_event(engine, keyword, tokens, lineno)
            result.events += 1
            if trace:
                suffix = f" [{note}]" if note else ""
                result.trace.append(f"{line}  ->  {engine.digest()}{suffix}")
            for v in engine.check_invariants():
                result.violations.append(f"line {lineno}: {v}")
        except ScenarioError:
            raise
        except GuardFailedError as exc:
            result.events += 1
            result.guard_failures.append(f"line {lineno}: {exc}")
            if trace:
                result.trace.append(f"{line}  ->  guard failed: {exc}")
        except CurrencyError as exc:
            result.guard_failures.append(f"line {lineno}: {exc}")
        except (ValueError, IndexError) as exc:
            raise ScenarioError(str(exc), lineno) from exc

    if engine is None and (customers or providers or services or early_rates):
        engine = build()
        result.engine = engine
    return result


def _parse_bill_id(token: str) -> int:
    # Accept both "3" and the "b3" spelling used in printed traces.
    if token[:1] == "b" and token[1:].isdigit():
        return int(token[1:])
    return int(token)


def _apply_event(engine: Engine, keyword: str, tokens: list[str], lineno: int) -> str | None:
    if keyword == "clock":
        if len(tokens) != 2:
            raise ScenarioError("expected: clock <int>", lineno)
        engine.advance_clock(int(tokens[1]))
    elif keyword == "rate":
        if len(tokens) != 4:
            raise ScenarioError("expected: rate <date> <code> <p/q>", lineno)
        engine.set_rate(int(tokens[1]), tokens[2], as_fraction(tokens[3]))
    elif keyword == "order":
        if len(tokens) != 3:
            raise ScenarioError("expected: order <customer> <service>", lineno)
        engine.order(tokens[1], tokens[2])
    elif keyword == "bill":
        if len(tokens) != 3:
            raise ScenarioError("expected: bill <service> <code>", lineno)
        bill = engine.bill(tokens[1], tokens[2])
        return f"b{bill.id} = {bill.val}"
    elif keyword == "pay":
        if len(tokens) != 2:
            raise ScenarioError("expected: pay <bill-id>", lineno)
        engine.pay_bill(_parse_bill_id(tokens[1]))
    elif keyword == "serve":
        if len(tokens) != 2:
            raise ScenarioError("expected: serve <service>", lineno)
        engine.serve(tokens[1])
    return None


# -- random legal traces --------------------------------------------------

_TRACE_CODES = ("EUR", "USD", "GBP")


def random_engine(seed: int) -> Engine:
    """A small randomized world: 4 customers, 2 providers, 6 services."""
    rng = random.Random(seed)
    customers = {f"c{i}": rng.choice(_TRACE_CODES) for i in range(4)}
    providers = {"p0", "p1"}
    services = {f"s{i}" for i in range(6)}
    provider_of = {f"s{i}": f"p{i % 2}" for i in range(6)}
    tariff = {
        s: Money(DecValue.from_int(rng.randint(1, 500)), rng.choice(_TRACE_CODES))
        for s in sorted(services)
    }
    initial = {
        code: Fraction(rng.randint(1, 200), rng.randint(1, 200)) for code in _TRACE_CODES
    }
    return Engine(customers, providers, services, provider_of, tariff, RateTable("EUR", initial))


def run_random_trace(seed: int, n_events: int = 100) -> tuple[Engine, list[Violation]]:
    """Drive a fresh random world through n_events legal events.

    Only enabled events are chosen, so guards never fire; invariants are
    re-checked after every event and any violations are returned (the
    trace-safety property expects none).  Deterministic per seed.
    """
    rng = random.Random(seed ^ 0x5EED)
    engine = random_engine(seed)
    customers = sorted(engine.customers)
    services = sorted(engine.services)
    remaining_orders = [(c, s) for c in customers for s in services]
    # Enabled-move bookkeeping, maintained incrementally.
    billable: list[str] = []
    billable_set: set[str] = set()
    unpaid: list[int] = []
    servable: list[str] = []
    violations: list[Violation] = []
    for _ in range(n_events):
        moves = ["clock", "rate"]
        if remaining_orders:
            moves.append("order")
        if billable:
            moves.append("bill")
        if unpaid:
            moves.append("pay")
        if servable:
            moves.append("serve")
        move = rng.choice(moves)
        if move == "clock":
            engine.advance_clock(engine.clock + rng.randint(0, 5))
        elif move == "rate":
            date = max(0, engine.clock - rng.randint(0, 3))
            engine.set_rate(
                date,
                rng.choice(_TRACE_CODES),
                Fraction(rng.randint(1, 200), rng.randint(1, 200)),
            )
        elif move == "order":
            c, s = remaining_orders.pop(rng.randrange(len(remaining_orders)))
            engine.order(c, s)
            if s not in billable_set and s not in engine.billing:
                billable_set.add(s)
                billable.append(s)
        elif move == "bill":
            s = billable.pop(rng.randrange(len(billable)))
            billable_set.discard(s)
            b = engine.bill(s, rng.choice(_TRACE_CODES))
            unpaid.append(b.id)
        elif move == "pay":
            bid = unpaid.pop(rng.randrange(len(unpaid)))
            engine.pay_bill(bid)
            servable.append(engine.bills[bid].ser)
        else:
            engine.serve(servable.pop(rng.randrange(len(servable))))
        found = engine.check_invariants()
        if found:
            violations.extend(found)
    return engine, violations
