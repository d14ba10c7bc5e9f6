"""Corrupted fixtures for negative controls.

Each control names the checks it is meant to break.  A control passes when
the battery fails, every failure is a targeted check carrying a witness, and
nothing else fails.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Tuple

from .algebra import FiniteAlgebra, function_algebra
from .algebroid import AlgebroidData
from .examples import (canonical_from_coproduct, finite_group, groupoid_algebroid, groupoid_from_group,
                       pair_groupoid, trivial_base)
from .integration import MeasuredAlgebroid, full_battery
from .linalg import ONE, LinMap
from .morphisms import MorphismSpec, check_antipode_preserved, validate_morphism
from .report import Check, Report

# a loop of order 5 whose operation is not associative: (1*1)*2 = 2, 1*(1*2) = 3
LOOP5 = [
    [0, 1, 2, 3, 4],
    [1, 0, 3, 4, 2],
    [2, 4, 0, 1, 3],
    [3, 2, 4, 0, 1],
    [4, 3, 1, 2, 0],
]


def loop_algebroid(table=LOOP5, name: str = "k^L5") -> MeasuredAlgebroid:
    """Functions on a finite loop with ``Delta(f)(x, y) = f(x * y)``; a Hopf
    algebra exactly when the loop is a group."""
    n = len(table)
    A = function_algebra([f"x{i}" for i in range(n)], name=name)
    Delta = LinMap(n * n, n, [{a * n + b: ONE for a in range(n) for b in range(n) if table[a][b] == g}
                              for g in range(n)])
    TL, TR, LT, RT = canonical_from_coproduct(A, Delta)
    I1 = LinMap.identity(1)
    core = AlgebroidData(A, trivial_base(n), trivial_base(n), I1, I1, TL, TR, LT, RT, name=name)
    count = LinMap(1, n, [{0: ONE} for _ in range(n)])
    return MeasuredAlgebroid(core, {0: ONE}, {0: ONE}, count, count, name=name)


def cyclic_table(n: int) -> List[List[int]]:
    return [[(a + b) % n for b in range(n)] for a in range(n)]


def swapped_star(mm: MeasuredAlgebroid) -> MeasuredAlgebroid:
    """Replace the involution of a two-point function algebra by ``f -> conj(f o swap)``.

    This is still an involution of the algebra but no longer compatible with
    the comultiplication of the group ``Z/2``.
    """
    A = mm.A
    star = LinMap(A.dim, A.dim, [{A.dim - 1 - k: ONE} for k in range(A.dim)])
    A2 = FiniteAlgebra(A.dim, A.mult, A.labels, A.unit, star, A.name)
    return mm.replace(core=mm.core.copy_with(A=A2), name=f"{mm.name} with swapped star")


def zero_weight(mm: MeasuredAlgebroid, unit: int = 1) -> MeasuredAlgebroid:
    muB = {k: c for k, c in mm.muB.items() if k != unit}
    muC = {k: c for k, c in mm.muC.items() if k != unit}
    return mm.replace(muB=muB, muC=muC, name=f"{mm.name} with zero weight")


def inversion_morphism(mm: MeasuredAlgebroid) -> MorphismSpec:
    """``f -> f o inv`` on a pair groupoid: multiplicative and non-degenerate,
    but it exchanges source and target, so it misses the base conditions."""
    g = pair_groupoid(2)
    idx = {a: i for i, a in enumerate(g.arrows)}
    cols = [{idx[g.inv[a]]: ONE} for a in g.arrows]
    return MorphismSpec.from_elements(mm.core, mm.core, LinMap(mm.n, mm.n, cols), "inversion on P2")


@dataclass
class Control:
    name: str
    targeted: Tuple[str, ...]  # name prefixes of the checks meant to fail
    run: Callable[[], List[Report]]
    clean: Callable[[], List[Report]]  # the same battery on the uncorrupted fixture


def _morphism_reports(spec: MorphismSpec) -> List[Report]:
    return [validate_morphism(spec), check_antipode_preserved(spec)]


def controls() -> List[Control]:
    g2 = lambda: groupoid_algebroid(groupoid_from_group(*finite_group("Z2"), name="G2"))
    p2 = lambda: groupoid_algebroid(pair_groupoid(2, name="P2"))
    ident = lambda mm: MorphismSpec.from_elements(mm.core, mm.core, LinMap.identity(mm.n), "id")
    return [
        Control("broken coassociativity", ("algebroid: bialgebroid: coassociativity",),
                lambda: [full_battery(loop_algebroid())],
                lambda: [full_battery(loop_algebroid(cyclic_table(5), "k^Z5"))]),
        Control("broken star", ("algebroid: star: ",),
                lambda: [full_battery(swapped_star(g2()))],
                lambda: [full_battery(g2())]),
        Control("zero weight", ("measured: mu_B faithful", "measured: mu_C faithful"),
                lambda: [full_battery(zero_weight(p2()))],
                lambda: [full_battery(p2())]),
        Control("broken morphism base condition", ("base: ",),
                lambda: _morphism_reports(inversion_morphism(p2())),
                lambda: _morphism_reports(ident(p2()))),
    ]


@dataclass
class ControlOutcome:
    control: Control
    failures: List[Check]
    stray: List[Check]
    clean_ok: bool

    @property
    def ok(self) -> bool:
        return (self.clean_ok and bool(self.failures) and not self.stray
                and all(c.witness is not None for c in self.failures))

    def describe(self) -> str:
        if not self.failures:
            return "no failure"
        f = self.failures[0]
        return f"{f.name} witness={f.witness}" + (f"; stray: {[c.name for c in self.stray]}" if self.stray else "")


def run_control(c: Control) -> ControlOutcome:
    reports = c.run()
    failed = [ch for r in reports for ch in r.checks if not ch.passed]
    hit = [ch for ch in failed if ch.name.startswith(c.targeted)]
    stray = [ch for ch in failed if not ch.name.startswith(c.targeted)]
    clean_ok = all(r.ok for r in c.clean())
    return ControlOutcome(c, hit, stray, clean_ok)
