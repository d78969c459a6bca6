# -*- coding: utf-8 -*-
"""
翻转曲线数值 - 特殊奇点处的曲线条数、相交数与适用性检查
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Set

from services.criterion import (CriterionCheck, FAIL, NOT_APPLICABLE, PASS,
                                NORMAL_T1_ASSUMPTION, REDUCED_ASSUMPTION)
from services.exact_arith import ExponentVector, monomials_of_degree
from services.wps_model import DistinguishedConfig, WCIFamily
from utils.exceptions import NonIntegralCount

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FlopNumbers:
    e: int
    A_dot_gamma: Fraction
    gamma_pair: Fraction
    gamma_self: Fraction


def config_wp(config: DistinguishedConfig, family: WCIFamily) -> int:
    return family.a(config.i1) * family.a(config.i2)


def flop_numbers(config: DistinguishedConfig, family: WCIFamily) -> FlopNumbers:
    wp = config_wp(config, family)
    a_k = family.a(config.k)
    total = family.d1 * family.d2
    if total % wp != 0:
        raise NonIntegralCount(f"e = {total}/{wp} 不是整数", family.family_no,
                               config.point_name(family))
    pair = Fraction(wp, family.d1 * a_k)
    return FlopNumbers(e=total // wp, A_dot_gamma=Fraction(1, a_k),
                       gamma_pair=pair, gamma_self=pair - 1)


def flop_identity_residual(config: DistinguishedConfig, family: WCIFamily) -> Fraction:
    """1/a_k + (1 - wp/(d1 a_k))(d1/wp) - d1/wp，恒为 0"""
    wp = config_wp(config, family)
    a_k = family.a(config.k)
    d1 = family.d1
    return Fraction(1, a_k) + (1 - Fraction(wp, d1 * a_k)) * Fraction(d1, wp) - Fraction(d1, wp)


def flop_prop_applicable(config: DistinguishedConfig, family: WCIFamily) -> CriterionCheck:
    wp = config_wp(config, family)
    a_k = family.a(config.k)
    e_integral = (family.d1 * family.d2) % wp == 0
    residual = flop_identity_residual(config, family)
    inputs = {"wp": wp, "d1": family.d1, "a_k": a_k, "e_integral": e_integral,
              "identity_residual": residual}
    if e_integral:
        inputs["e"] = (family.d1 * family.d2) // wp
    if not e_integral or residual != 0:
        verdict, detail = FAIL, "e 不是整数或闭式恒等式不成立"
    elif wp >= family.d1:
        verdict, detail = PASS, f"wp = {wp} ≥ d1 = {family.d1}"
    else:
        verdict, detail = NOT_APPLICABLE, f"wp = {wp} < d1 = {family.d1}"
    return CriterionCheck(lemma_id='lctfflopcurve', inputs=inputs, verdict=verdict,
                          assumed=[REDUCED_ASSUMPTION, NORMAL_T1_ASSUMPTION], detail=detail)


def upsilon_restrictions(config: DistinguishedConfig, family: WCIFamily):
    weights = (family.a(config.i1), family.a(config.i2))
    return monomials_of_degree(family.d1, weights), monomials_of_degree(family.d2, weights)


def upsilon_boundary_from_sets(first: Set[ExponentVector], second: Set[ExponentVector]) -> bool:
    """两组限制单项式都非空，且没有同一个变量整除全部单项式"""
    if not first or not second:
        return False
    monomials = list(first) + list(second)
    width = len(monomials[0])
    return not any(all(m[v] > 0 for m in monomials) for v in range(width))


def upsilon_boundary_check(config: DistinguishedConfig, family: WCIFamily) -> bool:
    first, second = upsilon_restrictions(config, family)
    return upsilon_boundary_from_sets(first, second)


def consistency_T1(config: DistinguishedConfig, family: WCIFamily,
                   numbers: Optional[FlopNumbers] = None) -> bool:
    """a_j2/a_k = (Γ_l^2) + (e-1)(Γ_l·Γ_m) 且 d2 = a_k + a_j2"""
    numbers = numbers or flop_numbers(config, family)
    a_k, a_j2 = family.a(config.k), family.a(config.j2)
    lhs = Fraction(a_j2, a_k)
    rhs = numbers.gamma_self + (numbers.e - 1) * numbers.gamma_pair
    return lhs == rhs and family.d2 == a_k + a_j2
