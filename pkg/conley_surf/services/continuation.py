"""
Continuation consistency checks for families of isolated invariant sets.

A set K0 continued to K_lambda = K1 u ... u Kn keeps its Conley index, so
the wedge of the component indices must equal the index of K0. Further
clauses depend on the type of K0:

- mixed: (beta1(K0) - sum beta1) + (u_c(K0) - sum u_c) = 1 - n
- attractor/repeller: exactly one component of the same type with equal
  beta1, every other component with trivial index
- sharing a block: sum beta1 <= beta1(K0), and a saddle stays a saddle
- a single continuation of a non-saddle mixed set is non-saddle exactly
  when beta1 is unchanged
"""

from typing import Sequence

from loguru import logger

from conley_surf.core.exceptions import ConleySurfError, NotAContinuationError
from conley_surf.models.conley_schemas import (
    ClauseViolation,
    ComponentSummary,
    ContinuationReport,
    DynamicsType,
)
from conley_surf.services.conley_classifier import descriptor_for_summary, wedge


def check_continuation(
    k0: ComponentSummary,
    comps: Sequence[ComponentSummary],
    shares_block: bool = False,
) -> ContinuationReport:
    """
    Check whether ``comps`` can continue ``k0``.

    Every violated clause is listed in evaluation order; the first one names
    the failure.

    Raises:
        InconsistentDataError: If a summary cannot come from a surface flow
    """
    comps = list(comps)
    report = ContinuationReport(k0=k0, components=comps, shares_block=shares_block)
    violations = report.violations

    base = descriptor_for_summary(k0)
    descriptors = [descriptor_for_summary(c) for c in comps]
    n = len(comps)
    sum_beta1 = sum(c.beta1 for c in comps)
    sum_u_c = sum(c.u_c for c in comps)

    if k0.dynamics_type == DynamicsType.MIXED:
        lhs = (k0.beta1 - sum_beta1) + (k0.u_c - sum_u_c)
        if lhs != 1 - n:
            violations.append(ClauseViolation(
                clause="equation",
                message=f"(beta1 difference) + (u_c difference) = {lhs}, expected 1 - n = {1 - n}",
            ))
    else:
        same = [i for i, c in enumerate(comps) if c.dynamics_type == k0.dynamics_type and c.beta1 == k0.beta1]
        others_trivial = all(descriptors[i].is_trivial for i in range(n) if i not in same[:1])
        if len(same) != 1 or not others_trivial:
            violations.append(ClauseViolation(
                clause="component",
                message=(
                    f"expected one {k0.dynamics_type.value.lower()} with beta1={k0.beta1} "
                    f"and trivial indices elsewhere, found {len(same)} match(es)"
                ),
            ))

    combined = wedge(descriptors)
    if combined != base:
        violations.append(ClauseViolation(
            clause="wedge",
            message=f"wedge of components is {combined.label()}, index of K0 is {base.label()}",
        ))

    if shares_block:
        if sum_beta1 > k0.beta1:
            violations.append(ClauseViolation(
                clause="shares_block",
                message=f"sum of beta1 = {sum_beta1} exceeds beta1(K0) = {k0.beta1}",
            ))
        if k0.dynamics_type == DynamicsType.MIXED and k0.u_c > 0 and sum_u_c == 0:
            violations.append(ClauseViolation(
                clause="saddle_persistence",
                message="a saddle set sharing its block must continue to saddle sets",
            ))

    if k0.dynamics_type == DynamicsType.MIXED and k0.u_c == 0 and n == 1:
        comp = comps[0]
        if (comp.u_c == 0) != (comp.beta1 == k0.beta1):
            violations.append(ClauseViolation(
                clause="non_saddle",
                message=(
                    f"continuation is {'non-saddle' if comp.u_c == 0 else 'saddle'} "
                    f"but beta1 {'differs' if comp.beta1 != k0.beta1 else 'is equal'}"
                ),
            ))

    logger.debug(f"continuation check: {len(violations)} violated clause(s)")
    return report


def require_continuation(
    k0: ComponentSummary,
    comps: Sequence[ComponentSummary],
    shares_block: bool = False,
) -> ContinuationReport:
    """
    Raises:
        NotAContinuationError: Naming the first violated clause
    """
    report = check_continuation(k0, comps, shares_block)
    if not report.passed:
        first = report.violations[0]
        raise NotAContinuationError(
            f"Not a continuation: {first.message}",
            clause=first.clause,
            details="; ".join(f"{v.clause}: {v.message}" for v in report.violations),
        )
    return report


def is_continuation(k0: ComponentSummary, comps: Sequence[ComponentSummary], shares_block: bool = False) -> bool:
    try:
        return check_continuation(k0, comps, shares_block).passed
    except ConleySurfError:
        return False
