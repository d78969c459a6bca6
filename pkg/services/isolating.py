# -*- coding: utf-8 -*-
"""
孤立类计算 - 投影法、结构法以及数据库分层条目的校验
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from services.exact_arith import lcm, semigroup_min_multiple
from services.wps_model import WCIFamily, anticanonical_degree
from utils.exceptions import UnknownLemmaTag

logger = logging.getLogger(__name__)

LEMMA_TAGS = ('isol-i', 'isol-iia', 'isol-iibc1', 'isol-iic', 'findisol', 'isolstr')
RECIPES = ('findisol', 'isolstr', 'recorded')
CURVE_FORMULAS = ('a4a5', 'two_over_a5', 'explicit')
CHECKS = ('exclG', 'criwisol')


@dataclass(frozen=True)
class CurveData:
    """(A·Γ) 与 mult_p(Γ)"""
    degree_AG: Fraction
    mult: int = 1
    formula: str = 'explicit'


@dataclass(frozen=True)
class IsolatingClass:
    l: int
    kind: str = 'point'
    curve_data: Optional[CurveData] = None

    def __post_init__(self):
        if self.kind not in ('point', 'curve'):
            raise ValueError(f"未知的孤立类类型: {self.kind}")
        if self.kind == 'curve' and (self.curve_data is None or self.curve_data.degree_AG <= 0):
            raise ValueError("曲线孤立类需要正的 (A·Γ)")


@dataclass
class StratumEntry:
    """某个族在某个点类/分支上的孤立类数据"""
    family_no: int
    stratum_id: str
    lemma_id: str
    l: int
    divisor_c: Fraction = Fraction(1)
    curve_data: Optional[CurveData] = None
    recipe: str = 'recorded'
    recipe_weights: List[int] = field(default_factory=list)
    recipe_j: Optional[int] = None
    recipe_mask: List[bool] = field(default_factory=list)
    check: str = 'exclG'
    scope: str = ''

    @property
    def isolating_class(self) -> IsolatingClass:
        if self.curve_data is not None:
            return IsolatingClass(self.l, 'curve', self.curve_data)
        return IsolatingClass(self.l, 'point')


def isolating_by_projection(weights: Sequence[int], j: int) -> int:
    """l = max_{k≠j} lcm(a_j, a_k)"""
    if not 0 <= j < len(weights):
        raise IndexError(f"投影坐标下标越界: {j}")
    others = [lcm(weights[j], w) for k, w in enumerate(weights) if k != j]
    return max(others) if others else weights[j]


def isolating_structured(weights: Sequence[int], nonzero_mask: Sequence[bool]) -> int:
    """前两个坐标非零时，按 ⟨a0,a1⟩ 的最小倍数给出孤立类次数"""
    if len(weights) < 2 or len(nonzero_mask) != len(weights):
        raise ValueError("权重与掩码长度不符")
    if not (nonzero_mask[0] and nonzero_mask[1]):
        raise ValueError("前两个坐标必须在该点非零")
    a0, a1 = weights[0], weights[1]
    values = [lcm(a0, a1)]
    for ai, nonzero in zip(weights[2:], nonzero_mask[2:]):
        values.append(ai * semigroup_min_multiple(a0, a1, ai) if nonzero else ai)
    return max(values)


def curve_degree_closed_form(entry: StratumEntry, family: WCIFamily) -> Optional[Fraction]:
    if entry.curve_data is None:
        return None
    formula = entry.curve_data.formula
    a4, a5 = family.a(4), family.a(5)
    if formula == 'a4a5':
        return Fraction(a4 + a5, a4 * a5)
    if formula == 'two_over_a5':
        return Fraction(2, a5)
    if formula == 'explicit':
        return entry.curve_data.degree_AG
    raise ValueError(f"未知的曲线公式标签: {formula}")


def stratum_entry_problems(entry: StratumEntry, family: WCIFamily) -> List[str]:
    """列出条目与可重新推导数据之间的全部不一致"""
    if entry.lemma_id not in LEMMA_TAGS:
        raise UnknownLemmaTag(f"未知的引理标签 {entry.lemma_id}", entry.family_no, entry.stratum_id)
    problems = []
    recipe = entry.lemma_id if entry.lemma_id in ('findisol', 'isolstr') else entry.recipe
    if recipe == 'findisol':
        weights = entry.recipe_weights or list(family.weights)
        l = isolating_by_projection(weights, entry.recipe_j or 0)
        if l != entry.l:
            problems.append(f"findisol 重新计算得 l={l}，记录为 {entry.l}")
    elif recipe == 'isolstr':
        l = isolating_structured(entry.recipe_weights, entry.recipe_mask)
        if l != entry.l:
            problems.append(f"isolstr 重新计算得 l={l}，记录为 {entry.l}")
    if entry.curve_data is not None:
        closed = curve_degree_closed_form(entry, family)
        if closed != entry.curve_data.degree_AG or closed <= 0:
            problems.append(f"(A·Γ) 闭式为 {closed}，记录为 {entry.curve_data.degree_AG}")
        if entry.curve_data.mult < 1:
            problems.append(f"曲线重数 {entry.curve_data.mult} 不是正整数")
    if entry.lemma_id == 'isol-iic':
        bound = 1 / anticanonical_degree(family)
        if entry.l > bound:
            problems.append(f"l={entry.l} 超过 1/(A^3)={bound}")
    return problems


def verify_stratum_entry(entry: StratumEntry, family: WCIFamily) -> bool:
    problems = stratum_entry_problems(entry, family)
    for problem in problems:
        logger.warning(f"No.{family.family_no} {entry.stratum_id}: {problem}")
    return not problems


def entry_from_record(family_no: int, record: Dict) -> StratumEntry:
    """由数据库中的 strata 条目构造 StratumEntry"""
    curve = record.get('curve')
    curve_data = None
    if curve:
        curve_data = CurveData(Fraction(int(curve['d_num']), int(curve['d_den'])),
                               int(curve.get('m', 1)), curve.get('formula', 'explicit'))
    return StratumEntry(
        family_no=family_no,
        stratum_id=record['id'],
        lemma_id=record['lemma'],
        l=int(record['l']),
        divisor_c=Fraction(str(record.get('c', 1))),
        curve_data=curve_data,
        recipe=record.get('recipe', 'recorded'),
        recipe_weights=list(record.get('weights', [])),
        recipe_j=record.get('j'),
        recipe_mask=[bool(v) for v in record.get('mask', [])],
        check=record.get('check', 'criwisol' if curve_data else 'exclG'),
        scope=record.get('scope', ''),
    )
