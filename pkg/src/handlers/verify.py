"""
verify-all: every acceptance check in one run
"""

import math
from typing import Callable, List, Tuple

import numpy as np
from rich.table import Table

from config.settings import settings
from lib.fixtures import PRINTED_CYCLE, PRINTED_P12_N2
from lib.logger import log_command, logger
from lib.perturb import (
    PerturbationSpec,
    closed_form_amplitude,
    diagonal_perturbation,
    down_sector_map,
    evolve_perturbed,
    exact_hamiltonian_level,
    exact_operator_level,
    first_order_hamiltonian_level,
    first_order_operator_level,
)
from lib.permops import (
    chain_cycle,
    commutator,
    compare_with_fixture,
    pauli_cycle,
    pauli_transposition,
    transposition_matrix,
)
from lib.sampling import make_signal, reconstruct_many, sample
from lib.spectral import (
    bch_verify,
    chain_hamiltonian,
    chain_spectrum,
    cogwheel_spectrum,
    descending_phase,
    exp_transposition_identity,
    expm_unitary,
    hamiltonian_from_powers,
    kappa_matrix,
    orbit_basis,
    sector_block,
)
from lib.statespace import make_basis
from lib.validators import validate_params
from schemas.reports import CheckResult, RunConfig
from utils.output import CommandResult

Check = Callable[[], Tuple[bool, str]]

HALVING_EPSILONS = (0.02, 0.01, 0.005)
CLOSED_FORM_EPSILONS = (0.01, 0.05, 0.1)
ALL_SCHEMES = ('operator', 'hamiltonian', 'exact-operator', 'exact-hamiltonian')


def _transpositions(n: int):
    return [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]


def check_matrix_fixtures() -> Tuple[bool, str]:
    p12 = compare_with_fixture(transposition_matrix(1, 2, 2), PRINTED_P12_N2, "P12 (n=2)")
    cycle = compare_with_fixture(chain_cycle(), PRINTED_CYCLE, "P12P23 (n=3)")
    return p12 == 0 and cycle == 0, f"P12 distance {p12:g}, P12P23 distance {cycle:g}"


def check_group_properties() -> Tuple[bool, str]:
    ok = True
    for n in (2, 3, 4):
        for i, j in _transpositions(n):
            p = transposition_matrix(i, j, n)
            ok &= (p.dagger() @ p).is_identity() and p.power(2).is_identity()
    cube = chain_cycle().power(3).is_identity()
    gap = float(np.linalg.norm(commutator(transposition_matrix(1, 2, 3), transposition_matrix(2, 3, 3)).entries))
    return ok and cube and gap > 0.5, f"transpositions ok: {ok}, U^3 = Id: {cube}, ‖[P12,P23]‖ = {gap:.4f}"


def check_pauli_equivalence() -> Tuple[bool, str]:
    worst = 0.0
    for n in (2, 3, 4):
        for i, j in _transpositions(n):
            pauli = pauli_transposition(i, j, n)
            worst = max(worst, float(np.max(np.abs(pauli.entries - transposition_matrix(i, j, n).entries))))
    cycle = float(np.max(np.abs(pauli_cycle().entries - chain_cycle().entries)))
    exact = settings.config.numerics.exact_tolerance
    return worst <= exact and cycle <= exact, f"transpositions {worst:.2e}, cycle {cycle:.2e}"


def check_spectrum() -> Tuple[bool, str]:
    third = np.exp(-2j * math.pi / 3)
    expected = np.array([1, 1, 1, 1, third, third, third ** 2, third ** 2])

    def by_phase(values):
        return np.array(sorted(values, key=lambda z: round(descending_phase(z), 6)))
    chain = float(np.max(np.abs(by_phase(chain_spectrum().eigenvalues) - by_phase(expected))))
    cogwheel = max(
        float(np.max(np.abs(cogwheel_spectrum(N).eigenvalues - np.exp(-2j * math.pi * np.arange(N) / N))))
        for N in range(1, 17)
    )
    return chain <= 1e-12 and cogwheel <= 1e-12, f"chain {chain:.2e}, cogwheel N<=16 {cogwheel:.2e}"


def check_hamiltonian_round_trip() -> Tuple[bool, str]:
    cycle = chain_cycle()
    worst = 0.0
    for T in (0.5, 1.0, 2.0):
        for forms in (chain_hamiltonian(T), hamiltonian_from_powers(T)):
            worst = max(worst, expm_unitary(forms.ontological, T).frobenius_distance(cycle))
    block = sector_block(chain_hamiltonian(1.0, 'cycle').ontological.matrix, orbit_basis('uud'))
    aux = float(np.linalg.norm(block - (2 * math.pi / 3) * kappa_matrix()))
    return worst <= 1e-12 and aux <= 1e-12, f"round trip {worst:.2e}, up-sector block {aux:.2e}"


def check_bch() -> Tuple[bool, str]:
    report = bch_verify(1e-10, 'cycle')
    product_form = report.residuals['lhs_vs_cycle']
    transposition = max(
        exp_transposition_identity(i, j, 3).residuals['transposition_vs_exponential']
        for i, j in _transpositions(3)
    )
    ok = report.passed and product_form <= 1e-12 and transposition <= 1e-12
    return ok, f"BCH {report.residuals['lhs_vs_rhs']:.2e}, product {product_form:.2e}, P = i exp {transposition:.2e}"


def halving_ratios(first_order: Callable, exact: Callable) -> List[float]:
    residuals = [first_order(eps).frobenius_distance(exact(eps)) for eps in HALVING_EPSILONS]
    return [residuals[k] / residuals[k + 1] for k in range(len(residuals) - 1)]


def check_perturbation_order() -> Tuple[bool, str]:
    operator = halving_ratios(first_order_operator_level, exact_operator_level)
    hamiltonian = halving_ratios(
        lambda eps: first_order_hamiltonian_level(eps, 'cycle'),
        lambda eps: exact_hamiltonian_level(eps, 1.0, 'cycle'),
    )
    ok = all(3.5 <= r <= 4.5 for r in operator + hamiltonian)
    return ok, f"operator {[round(r, 3) for r in operator]}, hamiltonian {[round(r, 3) for r in hamiltonian]}"


def check_closed_forms() -> Tuple[bool, str]:
    basis = make_basis(3)
    up = orbit_basis('uud')
    worst = 0.0
    for eps in CLOSED_FORM_EPSILONS:
        op = exact_hamiltonian_level(eps, 1.0, 'cycle')
        for c_in in up:
            for c_out in up:
                direct = op.entries[basis.position(c_out), basis.position(c_in)]
                worst = max(worst, abs(direct - closed_form_amplitude(c_in, c_out, eps)))

    pure = True
    for name in ALL_SCHEMES:
        for label in ('uuu', 'ddd'):
            report = evolve_perturbed(label, PerturbationSpec(name, 0.1, convention='cycle'))
            pure &= report.dominant == label and abs(report.max_prob - 1) <= 1e-12

    limit = max(
        exact_hamiltonian_level(0.0, 1.0, 'cycle').frobenius_distance(chain_cycle()),
        first_order_operator_level(0.0).frobenius_distance(chain_cycle()),
        first_order_hamiltonian_level(0.0, 'cycle').frobenius_distance(chain_cycle()),
        exact_operator_level(0.0).frobenius_distance(chain_cycle()),
    )
    ok = worst <= 1e-12 and pure and limit <= 1e-12
    return ok, f"closed forms {worst:.2e}, uuu/ddd pure: {pure}, ε=0 limit {limit:.2e}"


def check_degenerate_diagonal() -> Tuple[bool, str]:
    degenerate = diagonal_perturbation([0.3, 0.1, 0.1, 0.1, 0.2, 0.2, 0.2, 0.4])
    pure = all(abs(r.max_prob - 1) <= 1e-12 for r in degenerate.reports.values())
    broken = diagonal_perturbation([0.0, 0.1, 0.2, 0.3, 0.0, 0.0, 0.0, 0.0])
    mixed = all(broken.reports[s].max_prob < 1 - 1e-6 for s in ('uud', 'udu', 'duu'))
    return pure and mixed, f"degenerate pure: {pure}, broken mixes two-up sector: {mixed}"


def check_down_sector_symmetry() -> Tuple[bool, str]:
    basis = make_basis(3)
    worst = 0.0
    for eps in CLOSED_FORM_EPSILONS:
        entries = exact_hamiltonian_level(eps, 1.0, 'cycle').entries
        for c_in in orbit_basis('uud'):
            for c_out in orbit_basis('uud'):
                up = entries[basis.position(c_out), basis.position(c_in)]
                down = entries[basis.position(down_sector_map(c_out)), basis.position(down_sector_map(c_in))]
                worst = max(worst, abs(up - down))
    return worst <= 1e-12, f"max gap {worst:.2e}"


def check_sampling() -> Tuple[bool, str]:
    signal = make_signal('cos', 1.0)
    ts = np.linspace(-10.0, 10.0, 100) + 0.0123
    narrow = sample(signal, 2.0, (-100, 100))
    wide = sample(signal, 2.0, (-200, 200))
    nodes = float(np.max(np.abs(reconstruct_many(wide, wide.times) - wide.values)))
    narrow_error = float(np.max(np.abs(reconstruct_many(narrow, ts) - signal(ts))))
    wide_error = float(np.max(np.abs(reconstruct_many(wide, ts) - signal(ts))))
    ok = nodes <= settings.config.numerics.exact_tolerance and wide_error <= 1e-3 and wide_error < narrow_error
    return ok, f"nodes {nodes:.2e}, window 100 {narrow_error:.2e}, window 200 {wide_error:.2e}"


def check_normalization() -> Tuple[bool, str]:
    worst = 0.0
    for name in ('exact-operator', 'exact-hamiltonian'):
        for eps in CLOSED_FORM_EPSILONS:
            for config in make_basis(3):
                report = evolve_perturbed(config, PerturbationSpec(name, eps))
                worst = max(worst, abs(report.norm_squared - 1))
    return worst <= 1e-12, f"max |Σp − 1| = {worst:.2e}"


CHECKS: List[Tuple[str, Check]] = [
    ('matrix_fixtures', check_matrix_fixtures),
    ('group_properties', check_group_properties),
    ('pauli_equivalence', check_pauli_equivalence),
    ('spectrum', check_spectrum),
    ('hamiltonian_round_trip', check_hamiltonian_round_trip),
    ('bch_identity', check_bch),
    ('perturbation_order', check_perturbation_order),
    ('closed_forms', check_closed_forms),
    ('degenerate_diagonal', check_degenerate_diagonal),
    ('down_sector_symmetry', check_down_sector_symmetry),
    ('sampling', check_sampling),
    ('normalization', check_normalization),
]


@log_command
@validate_params('verify-all')
def verify_all(run_config: RunConfig) -> CommandResult:
    """
    Run every acceptance check; a check that raises counts as failed
    cogwheel verify-all --format text
    """
    results = []
    for name, check in CHECKS:
        try:
            passed, detail = check()
        except Exception as e:
            logger.warning(f"Check {name} raised: {e}")
            passed, detail = False, f"error: {e}"
        results.append(CheckResult(name=name, passed=bool(passed), detail=detail))

    all_passed = all(r.passed for r in results)
    table = Table(title="verify-all")
    table.add_column("check")
    table.add_column("pass")
    table.add_column("detail")
    for r in results:
        table.add_row(r.name, "PASS" if r.passed else "FAIL", r.detail)

    return CommandResult(
        command='verify-all',
        payload={'passed': all_passed, 'checks': results},
        columns=['check', 'pass', 'detail'],
        rows=[(r.name, r.passed, r.detail) for r in results],
        table=table,
        passed=all_passed,
    )
