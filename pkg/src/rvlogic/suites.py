"""Runners for the benchmark suites; each yields one result per case."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Iterator

from .corpus import boolean_cases, hajek_corpus, ksat_cases, stress_sentences
from .decide import check_entails, check_sat
from .intervals import IntervalSet
from .semantics import Logic
from .theory import SimpleSentence, Theory


@dataclass
class CaseResult:
    suite: str
    name: str
    expected: str
    got: str
    elapsed: float
    nodes: int

    @property
    def ok(self) -> bool:
        return self.expected == self.got


def _verdict(entailed: bool) -> str:
    return "ENTAILED" if entailed else "NOT_ENTAILED"


def run_hajek(**options) -> Iterator[CaseResult]:
    for case in hajek_corpus():
        query = SimpleSentence(case.formula, IntervalSet.point(1))
        for logic in Logic:
            start = time.perf_counter()
            r = check_entails(Theory(logic, []), query, **options)
            yield CaseResult("hajek", f"{case.name}/{logic.value}", _verdict(logic in case.logics),
                             _verdict(r.entailed), time.perf_counter() - start,
                             sum(c.stats.nodes for c in r.components))


def run_ksat(min_k: int = 3, max_k: int = 6, **options) -> Iterator[CaseResult]:
    for case in ksat_cases(min_k, max_k):
        start = time.perf_counter()
        r = check_sat(case.theory, **options)
        yield CaseResult("ksat", case.name, "SAT" if case.satisfiable else "UNSAT",
                         "SAT" if r.satisfiable else "UNSAT", time.perf_counter() - start, r.stats.nodes)


def run_boolean(**options) -> Iterator[CaseResult]:
    for case in boolean_cases():
        start = time.perf_counter()
        r = check_entails(Theory(case.logic, case.theory), case.query, **options)
        yield CaseResult("boolean", case.name, _verdict(case.entailed), _verdict(r.entailed),
                         time.perf_counter() - start, sum(c.stats.nodes for c in r.components))


def run_stress(count: int = 1000, **options) -> Iterator[CaseResult]:
    query, sentences = stress_sentences(count)
    for logic in Logic:
        start = time.perf_counter()
        r = check_entails(Theory(logic, sentences), query, **options)
        yield CaseResult("stress", f"count={count}/{logic.value}", "ENTAILED", _verdict(r.entailed),
                         time.perf_counter() - start, sum(c.stats.nodes for c in r.components))


SUITES = {"hajek": run_hajek, "ksat": run_ksat, "boolean": run_boolean, "stress": run_stress}
