"""
Named cross-check suites.

Every check is registered in `CHECKS` under a name and evaluated from an
inputs dictionary alone (seed, size, separation rule and any extra choices),
so a case can be replayed from its report record. `run_suite` expands a suite
into cases over seeds and sizes, runs them on a thread pool and returns a
`Report` whose records are sorted by case id, which keeps output identical
for any worker count.
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterable, List, NamedTuple, Optional, Sequence

import numpy as np

from .config import SuiteTolerances
from .engines import bethe_engine, enumeration_oracle, izergin_engine
from .errors import DWPFError, UsageError
from .model_core import ModelParams, RestrictedParams
from .numeric_kernel import principal_sqrt, relative_difference
from .param_io import generate_params, generate_restricted, parse_params
from .report import CaseRecord, Report
from .route_dispatcher import RouteDispatcher
from .validation import RULES

logger = logging.getLogger(__name__)

COUNT_SNAPSHOT = {1: 1, 2: 2, 3: 7, 4: 42, 5: 429}

# Minimum distance between interpolation nodes and from kernel poles in the degree check.
DEGREE_SPACING = 0.1


class Outcome(NamedTuple):
    value: Optional[complex]
    comparators: Dict[str, complex]
    residual: float


@dataclass(frozen=True)
class Check:
    """A registered check: how to evaluate it and which threshold applies at size N."""
    name: str
    evaluate: Callable[[Dict[str, Any]], Outcome]
    tolerance: Callable[[SuiteTolerances, int], float]
    sizes: Sequence[int]
    rule: str = "general"
    restricted: bool = False
    seeded: bool = True
    extras: Optional[Callable[[int, int], Dict[str, Any]]] = None


# Inputs

def _model(inputs: Dict[str, Any]) -> ModelParams:
    if "params" in inputs:
        return parse_params(inputs["params"])
    return generate_params(inputs["seed"], inputs["n"], RULES[inputs["rule"]],
                           restricted=inputs.get("restricted", False))


def _restricted(inputs: Dict[str, Any]) -> RestrictedParams:
    if "params" in inputs:
        return parse_params(inputs["params"]).to_restricted()
    return generate_restricted(inputs["seed"], inputs["n"], RULES[inputs["rule"]])


def _point(inputs: Dict[str, Any]):
    """A single (alpha, beta) expansion point drawn from the seed."""
    p = generate_restricted(inputs["seed"], 1, RULES[inputs["rule"]])
    return p.alpha[0], p.beta[0]


def _spread(values: Dict[str, complex]) -> float:
    return RouteDispatcher.spread(values)


# Route agreement

def _check_routes(inputs):
    params = _model(inputs)
    values = {
        "brute": enumeration_oracle.dwpf_brute(params),
        "transfer": enumeration_oracle.dwpf_transfer(params),
        "bethe": bethe_engine.dwpf_bethe(params),
        "product-general": bethe_engine.dwpf_product_general(params),
    }
    if params.n >= 2:
        values["twisted"] = bethe_engine.dwpf_twisted(params)
    return Outcome(values["brute"], values, _spread(values))


def _check_restricted(inputs):
    p = _restricted(inputs)
    values = {
        "det": izergin_engine.dwpf_restricted_det(p),
        "product-restricted": izergin_engine.dwpf_restricted_product(p),
        "product-general": bethe_engine.dwpf_product_general(p.to_model()),
    }
    if p.n <= 4:
        values["brute"] = enumeration_oracle.dwpf_brute(p.to_model())
    return Outcome(values["det"], values, _spread(values))


# Korepin properties

def _check_korepin_recursion(inputs):
    p = _restricted(inputs)
    worst = max(izergin_engine.korepin_recursion_residual(p, m, k)
                for m in range(1, p.n + 1) for k in range(1, p.n + 1))
    return Outcome(None, {}, worst)


def _check_second_recursion(inputs):
    p = _restricted(inputs)
    limit = izergin_engine.second_recursion_limit(p)
    product = izergin_engine.dwpf_restricted_product(p.with_beta(0, 1.0 / p.alpha[0]))
    residual = max(izergin_engine.second_recursion_residual(p), relative_difference(limit, product))
    return Outcome(limit, {"product-restricted": product}, residual)


def _check_row_expansion(inputs):
    return Outcome(None, {}, izergin_engine.row_expansion_residual(_restricted(inputs)))


def _symmetry_extras(seed: int, n: int) -> Dict[str, Any]:
    rng = np.random.default_rng([seed, n])
    return {
        "perm_alpha": [int(k) for k in rng.permutation(n)],
        "perm_beta": [int(k) for k in rng.permutation(n)],
    }


def _check_symmetry(inputs):
    p = _restricted(inputs)
    residual = max(
        izergin_engine.symmetry_residual(p, inputs["perm_alpha"]),
        izergin_engine.symmetry_residual(p, range(p.n), inputs["perm_beta"]),
    )
    return Outcome(None, {}, residual)


def _degree_nodes(p: RestrictedParams, index: int, count: int, rng: np.random.Generator) -> List[complex]:
    """Points for alpha_index that keep clear of the kernel poles, the other alphas and each other."""
    nodes: List[complex] = []
    others = [a for i, a in enumerate(p.alpha) if i != index]
    while len(nodes) < count:
        x = complex(0.7 * np.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random()))
        blocked = [*others, *p.beta, *nodes]
        if all(abs(x - y) >= DEGREE_SPACING for y in blocked) and \
                all(abs(1 - x * b) >= DEGREE_SPACING for b in p.beta):
            nodes.append(x)
    return nodes


def _check_degree(inputs):
    p = _restricted(inputs)
    rng = np.random.default_rng([inputs["seed"], p.n, 1])
    nodes = _degree_nodes(p, 0, p.n + 5, rng)
    residual = izergin_engine.degree_residual(p, 1, nodes[:p.n], nodes[p.n:])
    return Outcome(None, {}, residual)


def _check_cauchy(inputs):
    return Outcome(None, {}, izergin_engine.cauchy_factorization_residual(_restricted(inputs)))


# Homogeneous limit and Toda

def _check_homogeneous(inputs):
    alpha, beta = _point(inputs)
    n = inputs["n"]
    value = izergin_engine.dwpf_homogeneous(alpha, beta, n)
    c0 = principal_sqrt(1 - alpha * alpha) * principal_sqrt(1 - beta * beta)
    closed = c0 ** n * ((1 - alpha * alpha) * (1 - beta * beta)) ** (n * (n - 1) // 2)
    return Outcome(value, {"closed-form": closed}, relative_difference(value, closed))


def _check_toda(inputs):
    alpha, beta = _point(inputs)
    return Outcome(None, {}, izergin_engine.toda_residual(alpha, beta, inputs["n"]))


# Bethe identities

def _aux_line(params: ModelParams):
    return params.alpha[0], params.u[0]


def _check_f_matrix(inputs):
    params = _model(inputs)
    fm = bethe_engine.f_matrix(params)
    n = params.n
    norm = 1 + 0j
    for j in range(n):
        for k in range(j + 1, n):
            norm *= params.checked(j, k).a2
    dual = bethe_engine.StateVector.dual_reference(n).amplitudes
    reference = bethe_engine.StateVector.reference(n).amplitudes
    row = dual @ fm.forward.entries
    column = fm.inverse.entries @ reference
    residual = max(
        float(np.max(np.abs(row - norm * dual)) / abs(norm)),
        float(np.max(np.abs(column - reference))),
    )
    return Outcome(None, {"condition": complex(fm.condition)}, residual)


def _check_twist(inputs):
    params = _model(inputs)
    return Outcome(None, {}, bethe_engine.twist_residual(params, *_aux_line(params)))


def _check_spectrum(inputs):
    params = _model(inputs)
    return Outcome(None, {}, bethe_engine.spectrum_residual(params, *_aux_line(params)))


def _check_b_recursion(inputs):
    params = _model(inputs)
    return Outcome(None, {}, bethe_engine.operator_b_recursion_residual(params, *_aux_line(params)))


def _check_matrix_equation(inputs):
    params = _model(inputs)
    return Outcome(None, {}, bethe_engine.matrix_equation_residual(params, *_aux_line(params)))


def _check_bethe_recursion(inputs):
    params = _model(inputs)
    return Outcome(bethe_engine.dwpf_bethe(params), {}, bethe_engine.bethe_recursion_residual(params))


def _check_partition(inputs):
    return Outcome(None, {}, bethe_engine.partition_identity_residual(_model(inputs)))


def _check_product_form(inputs):
    params = _model(inputs)
    rng = np.random.default_rng([inputs["seed"], params.n, 2])
    points = 0.7 * np.sqrt(rng.random(2 * params.n)) * np.exp(2j * np.pi * rng.random(2 * params.n))
    return Outcome(None, {}, bethe_engine.product_form_residual(params, points))


# Counting

def _check_count(inputs):
    n = inputs["n"]
    count = enumeration_oracle.count_configurations(n)
    expected = COUNT_SNAPSHOT[n]
    return Outcome(complex(count), {"snapshot": complex(expected)}, float(abs(count - expected)))


def _check_census(inputs):
    n = inputs["n"]
    bad = 0
    for configuration in enumeration_oracle.enumerate_configurations(n):
        census = enumeration_oracle.vertex_census(configuration)
        c = {kind.name: count for kind, count in census.items()}
        if c["A1"] != c["A2"] or c["B1"] != c["B2"] or c["C1"] - c["C2"] != n:
            bad += 1
    return Outcome(None, {}, float(bad))


def _check_two_enumeration(inputs):
    n = inputs["n"]
    result = enumeration_oracle.two_enumeration(n)
    expected = 2.0 ** (n * n / 2.0)
    residual = max(relative_difference(result.normalized, result.weighted_count),
                   relative_difference(result.weighted_count, expected))
    return Outcome(result.normalized, {"weighted-count": result.weighted_count,
                                       "closed-form": complex(expected)}, residual)


def _tol(name: str) -> Callable[[SuiteTolerances, int], float]:
    return lambda tolerances, n: getattr(tolerances, name)


def _exact(tolerances: SuiteTolerances, n: int) -> float:
    return 0.0


CHECKS: Dict[str, Check] = {check.name: check for check in (
    Check("routes", _check_routes, _tol("routes"), range(1, 5)),
    Check("restricted", _check_restricted,
          lambda t, n: t.routes if n <= 6 else t.restricted_large, range(1, 9),
          rule="restricted", restricted=True),
    Check("korepin-recursion", _check_korepin_recursion, _tol("korepin"), range(1, 5),
          rule="restricted", restricted=True),
    Check("second-recursion", _check_second_recursion, _tol("second_recursion"), range(1, 4),
          rule="restricted", restricted=True),
    Check("row-expansion", _check_row_expansion, _tol("korepin"), range(1, 5),
          rule="restricted", restricted=True),
    Check("symmetry", _check_symmetry, _tol("symmetry"), range(2, 5),
          rule="restricted", restricted=True, extras=_symmetry_extras),
    Check("degree", _check_degree, _tol("degree"), range(2, 5), rule="restricted", restricted=True),
    Check("cauchy", _check_cauchy, lambda t, n: t.routes if n <= 4 else t.restricted_large, range(1, 7),
          rule="restricted", restricted=True),
    Check("homogeneous", _check_homogeneous, _tol("homogeneous"), range(1, 6), rule="restricted"),
    Check("toda", _check_toda, _tol("toda"), range(2, 4), rule="restricted"),
    Check("f-matrix", _check_f_matrix, _tol("twist"), range(2, 4)),
    Check("twist", _check_twist, _tol("twist"), range(2, 4), rule="bethe"),
    Check("spectrum", _check_spectrum, _tol("spectrum"), range(2, 3), rule="bethe"),
    Check("b-recursion", _check_b_recursion, _tol("twist"), range(2, 4)),
    Check("matrix-equation", _check_matrix_equation, _tol("twist"), range(2, 4), rule="bethe"),
    Check("bethe-recursion", _check_bethe_recursion, _tol("bethe_recursion"), range(2, 5)),
    Check("partition", _check_partition, _tol("partition"), range(1, 9)),
    Check("product-form", _check_product_form, _tol("routes"), range(2, 6)),
    Check("count", _check_count, _exact, range(1, 6), seeded=False),
    Check("census", _check_census, _exact, range(1, 5), seeded=False),
    Check("two-enumeration", _check_two_enumeration, _tol("routes"), range(1, 6), seeded=False),
)}

SUITES: Dict[str, List[str]] = {
    "routes-agree": ["routes", "restricted"],
    "korepin": ["korepin-recursion", "second-recursion", "row-expansion", "symmetry", "degree", "cauchy"],
    "toda": ["homogeneous", "toda"],
    "bethe-identities": ["f-matrix", "twist", "spectrum", "b-recursion", "matrix-equation",
                         "bethe-recursion", "partition", "product-form"],
    "counting": ["count", "census", "two-enumeration"],
}


@dataclass
class Case:
    case_id: str
    suite: str
    check: str
    n: int
    inputs: Dict[str, Any] = field(default_factory=dict)


def _case_id(suite: str, check: str, n: int, seed: Optional[int]) -> str:
    base = f"{suite}/{check}/n{n}"
    return base if seed is None else f"{base}/s{seed:04d}"


def build_cases(name: str, seeds: Iterable[int]) -> List[Case]:
    """
    Expands a suite into cases over seeds and sizes.

    Raises:
        UsageError: If the suite is unknown.
    """
    if name not in SUITES:
        raise UsageError(f"unknown suite '{name}'; choose from {', '.join(SUITES)}")
    seeds = list(seeds)
    cases = []
    for check_name in SUITES[name]:
        check = CHECKS[check_name]
        for n in check.sizes:
            for seed in (seeds if check.seeded else [None]):
                inputs: Dict[str, Any] = {"check": check_name, "n": n}
                if seed is not None:
                    inputs.update(seed=seed, rule=check.rule, restricted=check.restricted)
                    if check.extras is not None:
                        inputs.update(check.extras(seed, n))
                cases.append(Case(_case_id(name, check_name, n, seed), name, check_name, n, inputs))
    return cases


def _pair(value: complex) -> List[float]:
    return [float(value.real), float(value.imag)]


def evaluate_case(case: Case, tolerances: SuiteTolerances, record_timings: bool = False) -> CaseRecord:
    """Runs one case; library errors become failed records carrying the message."""
    check = CHECKS[case.check]
    tolerance = check.tolerance(tolerances, case.n)
    record = CaseRecord(case.case_id, case.suite, case.check, case.n, dict(case.inputs), tolerance=tolerance)
    start = time.perf_counter()
    try:
        outcome = check.evaluate(case.inputs)
    except (DWPFError, ArithmeticError, np.linalg.LinAlgError) as e:
        record.error = f"{type(e).__name__}: {e}"
        logger.debug(f"{case.case_id}: {record.error}")
    except Exception:
        logger.exception(f"Unexpected failure in {case.case_id}")
        raise
    else:
        if outcome.value is not None:
            record.value_re, record.value_im = _pair(complex(outcome.value))
        record.comparators = {k: _pair(complex(v)) for k, v in outcome.comparators.items()}
        record.residual = float(outcome.residual)
        record.passed = bool(np.isfinite(record.residual) and record.residual <= tolerance)
    if record_timings:
        record.elapsed_ms = (time.perf_counter() - start) * 1000.0
    return record


def _run_cases(cases: List[Case], report: Report, threads: int,
               tolerances: SuiteTolerances, record_timings: bool) -> Report:
    if threads <= 1:
        report.extend(evaluate_case(case, tolerances, record_timings) for case in cases)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            report.extend(pool.map(lambda c: evaluate_case(c, tolerances, record_timings), cases))
    return report


def run_suite(name: str, seeds: Iterable[int], threads: int = 1,
              tolerances: Optional[SuiteTolerances] = None, record_timings: bool = False) -> Report:
    """
    Runs a named suite over the given seeds.

    Args:
        name: One of SUITES.
        seeds: Seeds for the generated parameter sets; seedless checks run once.
        threads: Worker threads; the report does not depend on it.
        tolerances: Pass thresholds; defaults to SuiteTolerances().
        record_timings: Write elapsed milliseconds into each record.

    Returns:
        Report: One record per case, sorted by case id.
    """
    tolerances = tolerances or SuiteTolerances()
    cases = build_cases(name, seeds)
    logger.info(f"Running suite '{name}': {len(cases)} cases on {threads} thread(s)")
    report = _run_cases(cases, Report(name), threads, tolerances, record_timings)
    stats = report.get_stats()
    if report.passed:
        logger.info(f"✅ Suite '{name}' passed: {stats['cases']} cases, max residual {stats['max_residual']}")
    else:
        logger.error(f"❌ Suite '{name}' failed: {stats['failures']} of {stats['cases']} cases")
    return report


def replay_record(record: CaseRecord, tolerances: Optional[SuiteTolerances] = None) -> CaseRecord:
    """Re-evaluates a case from the inputs echoed in its record."""
    inputs = dict(record.inputs)
    check = inputs.get("check")
    if check == "compute":
        return _evaluate_request(record.case_id, inputs, tolerances or SuiteTolerances(), False)
    if check not in CHECKS:
        raise UsageError(f"record {record.case_id} names no known check: {check!r}")
    case = Case(record.case_id, record.suite, check, inputs["n"], inputs)
    return evaluate_case(case, tolerances or SuiteTolerances())


# Sweeps

def _evaluate_request(case_id: str, inputs: Dict[str, Any], tolerances: SuiteTolerances,
                      record_timings: bool) -> CaseRecord:
    dispatcher = RouteDispatcher()
    method = inputs["method"]
    reference = inputs.get("reference")
    record = CaseRecord(case_id, "sweep", method, inputs.get("n", 0), dict(inputs))
    start = time.perf_counter()
    try:
        params = _model(inputs)
        record.n = params.n
        value = dispatcher.compute(method, params)
        record.value_re, record.value_im = _pair(value)
        if reference is not None:
            other = dispatcher.compute(reference, params)
            record.comparators = {reference: _pair(other)}
            record.residual = relative_difference(value, other)
            record.tolerance = tolerances.routes
            record.passed = record.residual <= record.tolerance
        else:
            record.passed = True
    except DWPFError as e:
        record.error = f"{type(e).__name__}: {e}"
    if record_timings:
        record.elapsed_ms = (time.perf_counter() - start) * 1000.0
    return record


def run_sweep(requests: Sequence[Dict[str, Any]], threads: int = 1,
              tolerances: Optional[SuiteTolerances] = None, record_timings: bool = False) -> Report:
    """
    Evaluates a list of compute requests.

    Each request names a `method`, and either a parameter document under
    `params` or a `seed` and `n` (with optional `rule` and `restricted`).
    An optional `reference` method turns the request into a comparison.
    """
    tolerances = tolerances or SuiteTolerances()
    normalized = []
    for index, request in enumerate(requests):
        if not isinstance(request, dict):
            raise UsageError(f"sweep request {index} must be an object, got {type(request).__name__}")
        if "method" not in request:
            raise UsageError(f"sweep request {index} has no 'method'")
        if "params" not in request and not {"seed", "n"} <= set(request):
            raise UsageError(f"sweep request {index} needs 'params' or both 'seed' and 'n'")
        for key in ("method", "reference", "rule"):
            if key in request and not isinstance(request[key], str):
                raise UsageError(f"sweep request {index}: '{key}' must be a string")
        for key in ("seed", "n"):
            if key in request and (isinstance(request[key], bool) or not isinstance(request[key], int)):
                raise UsageError(f"sweep request {index}: '{key}' must be an integer, got {request[key]!r}")
        if not isinstance(request.get("restricted", False), bool):
            raise UsageError(f"sweep request {index}: 'restricted' must be true or false")
        inputs = {"check": "compute", "rule": "general", "restricted": False, **request}
        if inputs["rule"] not in RULES:
            raise UsageError(f"sweep request {index}: unknown rule '{inputs['rule']}'")
        normalized.append((f"sweep/{index:05d}", inputs))

    report = Report("sweep")
    if threads <= 1:
        report.extend(_evaluate_request(cid, inp, tolerances, record_timings) for cid, inp in normalized)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            report.extend(pool.map(lambda item: _evaluate_request(*item, tolerances, record_timings), normalized))
    logger.info(f"Sweep finished: {len(report)} requests, {len(report.failures)} failures")
    return report


__all__ = [
    "CHECKS",
    "COUNT_SNAPSHOT",
    "Case",
    "Check",
    "Outcome",
    "SUITES",
    "build_cases",
    "evaluate_case",
    "replay_record",
    "run_suite",
    "run_sweep",
]
