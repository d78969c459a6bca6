# -*- coding: utf-8 -*-
"""
曲线 L_xy = H_x ∩ H_y 的规范方程、奇点 Jacobian 校验与指标一覆盖上的重数
"""

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import sympy

from config import Config
from services.exact_arith import monomials_of_degree, weighted_degree
from utils.exceptions import NotEliminable, PointNotOnCurve, SchemaError

logger = logging.getLogger(__name__)

Coefficient = Union[Fraction, str]


@dataclass(frozen=True)
class Term:
    """系数为有理数或命名非零参数（"param:λ" 记为 "λ"）"""
    coeff: Coefficient
    exp: Tuple[int, ...]

    @property
    def is_param(self) -> bool:
        return isinstance(self.coeff, str)


@dataclass(frozen=True)
class LxyCondition:
    """一般性条件：某个单项式必须出现在 G1 或 G2 中；exp 为空时只是文字记录"""
    text: str
    exp: Tuple[int, ...] = ()


@dataclass
class LxyRecord:
    family_no: int
    variables: Tuple[str, ...]
    weights: Tuple[int, ...]
    degrees: Tuple[int, int]
    g1: List[Term]
    g2: List[Term]
    sing_points: List[str] = field(default_factory=list)
    sing_mults: Dict[str, int] = field(default_factory=dict)
    irr_witness: str = ''
    conditions: List[LxyCondition] = field(default_factory=list)
    cover_singular: Dict[str, int] = field(default_factory=dict)

    def point_index(self, point_id: str) -> int:
        name = point_id[2:] if point_id.startswith('p_') else point_id
        if name not in self.variables:
            raise ValueError(f"No.{self.family_no}: 未知的坐标点 {point_id}")
        return self.variables.index(name)

    def params(self) -> List[str]:
        return sorted({t.coeff for t in self.g1 + self.g2 if t.is_param})


@dataclass(frozen=True)
class LocalCurveMult:
    point_id: str
    mult: int

    def __post_init__(self):
        if self.mult < 1:
            raise ValueError(f"重数必须 ≥ 1: {self.mult}")


def parse_coefficient(raw: str) -> Coefficient:
    raw = str(raw).strip()
    if raw.startswith('param:'):
        name = raw[len('param:'):].strip()
        if not name:
            raise ValueError("参数名为空")
        return name
    value = Fraction(raw)
    if value == 0:
        raise ValueError("系数不能为 0")
    return value


def parse_terms(raw_terms, width: int, where: str) -> List[Term]:
    """把数据库中的项列表转为 Term，格式错误时抛出 SchemaError"""
    if not isinstance(raw_terms, list) or not raw_terms:
        raise SchemaError(f"{where}: 项列表必须是非空列表", [f"{where}: not a non-empty list"])
    terms = []
    for n, raw in enumerate(raw_terms):
        path = f"{where}[{n}]"
        if not isinstance(raw, dict) or 'coeff' not in raw or 'exp' not in raw:
            raise SchemaError(f"{path}: 项需要 coeff 与 exp", [f"{path}: missing coeff/exp"])
        exp = raw['exp']
        if (not isinstance(exp, list) or len(exp) != width
                or any(not isinstance(e, int) or isinstance(e, bool) or e < 0 for e in exp)):
            raise SchemaError(f"{path}: exp 必须是 {width} 个非负整数", [f"{path}: bad exp {exp!r}"])
        try:
            coeff = parse_coefficient(raw['coeff'])
        except (ValueError, ZeroDivisionError) as e:
            raise SchemaError(f"{path}: 系数无法解析: {e}", [f"{path}: bad coeff {raw['coeff']!r}"])
        terms.append(Term(coeff, tuple(exp)))
    return terms


def lxy_problems(record: LxyRecord) -> List[str]:
    problems = []
    allowed = [monomials_of_degree(d, record.weights) for d in record.degrees]
    for name, terms, d, support in (('g1', record.g1, record.degrees[0], allowed[0]),
                                    ('g2', record.g2, record.degrees[1], allowed[1])):
        for term in terms:
            if term.exp not in support:
                problems.append(f"{name} 项 {monomial_str(record, term.exp)} 的次数为 "
                                f"{weighted_degree(term.exp, record.weights)}，应为 {d}")
    for cond in record.conditions:
        if not cond.exp:
            continue
        degree = weighted_degree(cond.exp, record.weights)
        if degree == record.degrees[0]:
            present = any(t.exp == cond.exp for t in record.g1)
        elif degree == record.degrees[1]:
            present = any(t.exp == cond.exp for t in record.g2)
        else:
            present = False
        if not present:
            problems.append(f"违反一般性条件 \"{cond.text}\"")
    return problems


def lxy_validate(record: LxyRecord) -> bool:
    problems = lxy_problems(record)
    for problem in problems:
        logger.warning(f"No.{record.family_no} L_xy: {problem}")
    return not problems


def monomial_str(record: LxyRecord, exp: Sequence[int]) -> str:
    parts = []
    for name, e in zip(record.variables, exp):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return ''.join(parts) or '1'


def polynomial_str(record: LxyRecord, terms: Sequence[Term]) -> str:
    pieces = []
    for term in terms:
        mono = monomial_str(record, term.exp)
        if not term.is_param and term.coeff == 1:
            pieces.append(mono)
        else:
            pieces.append(f"{term.coeff}·{mono}")
    return ' + '.join(pieces)


def _symbols(record: LxyRecord):
    return sympy.symbols(' '.join(record.variables))


def instantiate(record: LxyRecord, primes: Optional[Sequence[int]] = None):
    """参数按名称排序依次取素数，返回 (G1, G2, 变量)"""
    primes = tuple(primes or Config.PARAM_PRIMES)
    params = record.params()
    if len(params) > len(primes):
        raise ValueError(f"参数个数 {len(params)} 超过可用素数个数")
    values = dict(zip(params, primes))
    gens = _symbols(record)

    def _build(terms):
        expr = sympy.Integer(0)
        for term in terms:
            coeff = sympy.Integer(values[term.coeff]) if term.is_param else \
                sympy.Rational(term.coeff.numerator, term.coeff.denominator)
            expr += coeff * sympy.Mul(*[g ** e for g, e in zip(gens, term.exp)])
        return sympy.expand(expr)

    return _build(record.g1), _build(record.g2), gens


def _point_subs(gens, index: int) -> Dict:
    return {g: (1 if i == index else 0) for i, g in enumerate(gens)}


def on_curve(record: LxyRecord, point_id: str, primes: Optional[Sequence[int]] = None) -> bool:
    g1, g2, gens = instantiate(record, primes)
    subs = _point_subs(gens, record.point_index(point_id))
    return g1.subs(subs) == 0 and g2.subs(subs) == 0


def coordinate_points_on_curve(record: LxyRecord) -> List[str]:
    return [f"p_{v}" for v in record.variables if on_curve(record, f"p_{v}")]


def lxy_jacobian_sing_check(record: LxyRecord, point_id: str,
                            primes: Optional[Sequence[int]] = None) -> bool:
    """点在曲线上且 2×4 Jacobian 秩 < 2"""
    g1, g2, gens = instantiate(record, primes)
    subs = _point_subs(gens, record.point_index(point_id))
    if g1.subs(subs) != 0 or g2.subs(subs) != 0:
        return False
    jacobian = sympy.Matrix([[sympy.diff(g, v) for v in gens] for g in (g1, g2)]).subs(subs)
    return jacobian.rank() < 2


def _linear_solution(eq, var):
    """eq 关于 var 一次且系数为非零常数时返回 var 的解"""
    poly = sympy.Poly(eq, var)
    if poly.degree() != 1:
        return None
    coeff = poly.coeff_monomial(var)
    if not coeff.is_number or coeff == 0:
        return None
    rest = sympy.expand(eq - coeff * var)
    if rest.has(var):
        return None
    return sympy.expand(-rest / coeff)


def _eliminate(record: LxyRecord, point_id: str, primes: Optional[Sequence[int]] = None):
    g1, g2, gens = instantiate(record, primes)
    index = record.point_index(point_id)
    chart = gens[index]
    remaining = [g for i, g in enumerate(gens) if i != index]
    eqs = [sympy.expand(g.subs(chart, 1)) for g in (g1, g2)]
    origin = {v: 0 for v in remaining}
    if any(eq.subs(origin) != 0 for eq in eqs):
        raise PointNotOnCurve(f"{point_id} 不在 L_xy 上", record.family_no, 'lxy')
    affine = list(eqs)
    steps = []
    while len(eqs) > 1:
        step = None
        for n, eq in enumerate(eqs):
            for var in remaining:
                if not eq.has(var):
                    continue
                solution = _linear_solution(eq, var)
                if solution is not None:
                    step = (n, var, solution)
                    break
            if step:
                break
        if step is None:
            raise NotEliminable(f"{point_id} 处没有可线性消去的变量", record.family_no, 'lxy')
        n, var, solution = step
        eqs = [sympy.expand(eq.subs(var, solution)) for m, eq in enumerate(eqs) if m != n]
        remaining = [v for v in remaining if v != var]
        steps.append((var, solution))
        logger.debug(f"No.{record.family_no} {point_id}: 消去 {var} = {solution}")
    plane = eqs[0]
    if plane == 0:
        raise NotEliminable(f"{point_id} 处消元后方程恒为零", record.family_no, 'lxy')
    return plane, remaining, steps, affine


def eliminate_to_plane_curve(record: LxyRecord, point_id: str,
                             primes: Optional[Sequence[int]] = None):
    """置该坐标为1后逐次线性消元，返回 (平面曲线多项式, 剩余变量)"""
    plane, remaining, _, _ = _eliminate(record, point_id, primes)
    return plane, remaining


def elimination_is_exact(record: LxyRecord, point_id: str, samples: int = 20,
                         seed: Optional[int] = None,
                         primes: Optional[Sequence[int]] = None) -> bool:
    """
    在平面曲线上随机取有理切片，把消去的变量代回原来的两个仿射方程

    每个切片 free = c 上，代回后的方程关于另一个变量必须被切片多项式整除，
    即曲线在该切片上的每个点都提升为 L_xy 上的点。
    """
    plane, remaining, steps, affine = _eliminate(record, point_id, primes)
    lift = {}
    for var, solution in reversed(steps):
        lift[var] = sympy.expand(solution.subs(lift))
    lifted = [sympy.expand(eq.subs(lift)) for eq in affine]
    if len(remaining) != 2:
        raise NotEliminable(f"{point_id} 处消元后剩余 {len(remaining)} 个变量", record.family_no, 'lxy')
    free, along = remaining
    if sympy.degree(plane, along) < 1:
        free, along = along, free

    rng = random.Random(Config.FALSIFIER_SEED if seed is None else seed)
    checked = 0
    for _ in range(samples * 5):
        if checked == samples:
            break
        value = sympy.Rational(rng.randint(-60, 60), rng.randint(1, 25))
        section = sympy.Poly(plane.subs(free, value), along)
        if section.degree() < 1:
            continue
        for eq in lifted:
            remainder = sympy.Poly(eq.subs(free, value), along).rem(section)
            if not remainder.is_zero:
                logger.warning(f"No.{record.family_no} {point_id}: {free} = {value} 处代回余式 "
                               f"{remainder.as_expr()} ≠ 0")
                return False
        checked += 1
    return checked == samples


def lxy_mult_at(record: LxyRecord, point_id: str,
                primes: Optional[Sequence[int]] = None) -> LocalCurveMult:
    plane, remaining = eliminate_to_plane_curve(record, point_id, primes)
    poly = sympy.Poly(plane, *remaining)
    mult = min(sum(m) for m in poly.monoms())
    return LocalCurveMult(point_id, mult)
