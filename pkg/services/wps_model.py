# -*- coding: utf-8 -*-
"""
加权射影空间与余维2加权完全交族

包含: 反典范次数、指标关系、良构性、拟光滑性判据、奇点篮计算、
特殊奇点检测、权积与 Kawamata 胀开次数。
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import gcd, prod
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from services.exact_arith import has_monomial, monomials_of_degree
from utils.exceptions import AmbiguousStratum, NonIntegralCount

logger = logging.getLogger(__name__)

CLASS_TAGS = ('br', 'F(i)', 'F(ii)', 'F(other)', 'dP', 'unknown')
POINT_MARKS = ('QI', 'EI', 'd')
# 坐标名称，与权重升序一一对应
COORD_NAMES = ('x', 'y', 'z', 's', 't', 'u')


@dataclass(frozen=True)
class WeightedSpace:
    """加权射影空间，权重升序存放，perm[i] 为排序后第 i 个权重的原始下标"""
    weights: Tuple[int, ...]
    perm: Tuple[int, ...] = ()

    @classmethod
    def from_weights(cls, weights: Sequence[int]) -> 'WeightedSpace':
        if not weights or any(int(w) < 1 for w in weights):
            raise ValueError(f"权重必须是正整数: {weights}")
        order = sorted(range(len(weights)), key=lambda i: (weights[i], i))
        return cls(weights=tuple(int(weights[i]) for i in order), perm=tuple(order))

    @property
    def dim(self) -> int:
        return len(self.weights) - 1

    def coord_name(self, index: int) -> str:
        if len(self.weights) == len(COORD_NAMES):
            return COORD_NAMES[index]
        return f"x{index}"


@dataclass(frozen=True)
class WCIFamily:
    """X_{d1,d2} ⊂ P(a0,...,a5)"""
    family_no: int
    space: WeightedSpace
    degrees: Tuple[int, int]
    class_tag: str = 'unknown'

    @classmethod
    def create(cls, family_no: int, weights: Sequence[int], degrees: Sequence[int],
               class_tag: str = 'unknown') -> 'WCIFamily':
        d1, d2 = sorted(int(d) for d in degrees)
        if class_tag not in CLASS_TAGS:
            raise ValueError(f"未知的族分类标签: {class_tag}")
        return cls(family_no=int(family_no), space=WeightedSpace.from_weights(weights),
                   degrees=(d1, d2), class_tag=class_tag)

    @property
    def weights(self) -> Tuple[int, ...]:
        return self.space.weights

    @property
    def d1(self) -> int:
        return self.degrees[0]

    @property
    def d2(self) -> int:
        return self.degrees[1]

    def a(self, index: int) -> int:
        return self.space.weights[index]

    def label(self) -> str:
        w = ','.join(str(a) for a in self.weights)
        return f"No.{self.family_no} X_{{{self.d1},{self.d2}}} ⊂ P({w})"


@dataclass(frozen=True)
class QuotientSingularity:
    """1/r(1,a,r-a) 型商奇点，a 规范化为 min(a, r-a)"""
    r: int
    a: int
    count: int = 1
    marks: FrozenSet[str] = frozenset()

    def __post_init__(self):
        if self.r < 2 or not 1 <= self.a < self.r or gcd(self.a, self.r) != 1:
            raise ValueError(f"不是终端商奇点: 1/{self.r}(1,{self.a},{self.r - self.a})")
        if self.count < 1:
            raise ValueError(f"奇点个数必须为正: {self.count}")
        unknown = set(self.marks) - set(POINT_MARKS)
        if unknown:
            raise ValueError(f"未知的奇点标记: {sorted(unknown)}")
        object.__setattr__(self, 'a', min(self.a, self.r - self.a))
        object.__setattr__(self, 'marks', frozenset(self.marks))

    @property
    def type_key(self) -> Tuple[int, int]:
        return (self.r, self.a)

    def label(self) -> str:
        """表格写法：r ≤ 4 时只有一种终端型，记为 1/r；否则 1/r(a,r-a)"""
        if self.r <= 4:
            return f"1/{self.r}"
        return f"1/{self.r}({self.a},{self.r - self.a})"

    def full_label(self) -> str:
        text = self.label()
        if self.count > 1:
            text = f"{self.count} × {text}"
        if self.marks:
            text += '_' + ''.join(sorted(self.marks))
        return text


@dataclass(frozen=True)
class Basket:
    singularities: Tuple[QuotientSingularity, ...] = ()

    def type_counter(self) -> Counter:
        """按 (r, a) 统计个数，忽略标记"""
        counter: Counter = Counter()
        for s in self.singularities:
            counter[s.type_key] += s.count
        return counter

    def canonical(self) -> Tuple[QuotientSingularity, ...]:
        merged: Dict[Tuple[int, int, FrozenSet[str]], int] = {}
        for s in self.singularities:
            key = (s.r, s.a, s.marks)
            merged[key] = merged.get(key, 0) + s.count
        return tuple(QuotientSingularity(r, a, n, marks)
                     for (r, a, marks), n in sorted(merged.items(),
                                                    key=lambda item: (item[0][0], item[0][1], item[1],
                                                                      sorted(item[0][2]))))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Basket):
            return NotImplemented
        return self.type_counter() == other.type_counter()

    def __hash__(self):
        return hash(frozenset(self.type_counter().items()))

    def label(self) -> str:
        return ', '.join(s.full_label() for s in self.canonical()) or '—'


@dataclass(frozen=True)
class DistinguishedConfig:
    """坐标翻转曲线配置：F1 = x_k x_j1 + ..., F2 = x_k x_j2 + ..."""
    k: int
    j1: int
    j2: int
    i1: int
    i2: int

    def indices(self) -> Tuple[int, int, int, int, int]:
        return (self.k, self.j1, self.j2, self.i1, self.i2)

    def singularity(self, family: WCIFamily) -> QuotientSingularity:
        return QuotientSingularity(family.a(self.k), family.a(self.i1), marks=frozenset({'d'}))

    def point_name(self, family: WCIFamily) -> str:
        return f"p_{family.space.coord_name(self.k)}"


@dataclass
class StratumChecksum:
    """0维奇异层上的轨形 Bézout 校验"""
    r: int
    coords: Tuple[int, ...]
    weights: Tuple[int, ...]
    bezout: Fraction
    point_sum: Fraction
    counts: Dict[int, int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.bezout == self.point_sum


def anticanonical_degree(family: WCIFamily) -> Fraction:
    """(A^3) = d1 d2 / Π a_i"""
    return Fraction(family.d1 * family.d2, prod(family.weights))


def index_check(family: WCIFamily) -> bool:
    return sum(family.weights) - (family.d1 + family.d2) == 1


def weight_product(s: QuotientSingularity) -> int:
    return s.a * (s.r - s.a)


def kawamata_degree(A3: Fraction, s: QuotientSingularity) -> Fraction:
    """Kawamata 胀开后 (-K_Y)^3 = A^3 - 1/(r a (r-a))"""
    return Fraction(A3) - Fraction(1, s.r * weight_product(s))


def _singular_strata(weights: Sequence[int]) -> List[Tuple[int, Tuple[int, ...]]]:
    """(r, I_r)，r 从大到小；I_r 为权重被 r 整除的坐标"""
    candidates = sorted({r for w in weights for r in range(2, w + 1) if w % r == 0}, reverse=True)
    strata = []
    for r in candidates:
        coords = tuple(i for i, w in enumerate(weights) if w % r == 0)
        if coords:
            strata.append((r, coords))
    return strata


def wellformed(space: WeightedSpace, degrees: Sequence[int] = ()) -> bool:
    """环境空间与成员的良构性"""
    weights = space.weights
    n = len(weights) - 1
    for subset in combinations(weights, n):
        g = 0
        for w in subset:
            g = gcd(g, w)
        if g != 1:
            return False
    if not degrees:
        return True
    dim_x = n - len(degrees)
    for r, coords in _singular_strata(weights):
        sub = [weights[i] for i in coords]
        cut = sum(1 for d in degrees if has_monomial(d, sub))
        if len(coords) - 1 - cut > dim_x - 2:
            logger.debug(f"层 I_{r}={coords} 与成员的交维数过大")
            return False
    return True


def _externals(d: int, weights: Sequence[int], subset: Sequence[int]) -> set:
    """满足 (I-单项式)·x_e 次数为 d 的外部变量 e"""
    sub = [weights[i] for i in subset]
    return {e for e in range(len(weights))
            if e not in subset and d >= weights[e] and has_monomial(d - weights[e], sub)}


def quasismooth_hypersurface(d: int, space: WeightedSpace) -> bool:
    weights = space.weights
    for size in range(1, len(weights) + 1):
        for subset in combinations(range(len(weights)), size):
            if has_monomial(d, [weights[i] for i in subset]):
                continue
            if len(_externals(d, weights, subset)) < size:
                logger.debug(f"超曲面 d={d} 在子集 {subset} 处不满足拟光滑条件")
                return False
    return True


def ci_stratum_ok(weights: Sequence[int], d1: int, d2: int, subset: Sequence[int]) -> bool:
    """余维2拟光滑判据在单个坐标子集上的检验"""
    k = len(subset)
    sub = [weights[i] for i in subset]
    pure1, pure2 = has_monomial(d1, sub), has_monomial(d2, sub)
    if pure1 and pure2:
        return True
    ext1, ext2 = _externals(d1, weights, subset), _externals(d2, weights, subset)
    if pure1:
        return len(ext2) >= k - 1
    if pure2:
        return len(ext1) >= k - 1
    return len(ext1) >= k and len(ext2) >= k and len(ext1 | ext2) >= k + 1


def quasismooth_ci_necessary(family: WCIFamily) -> bool:
    weights = family.weights
    for size in range(1, len(weights) + 1):
        for subset in combinations(range(len(weights)), size):
            if not ci_stratum_ok(weights, family.d1, family.d2, subset):
                logger.debug(f"No.{family.family_no} 子集 {subset} 不满足拟光滑条件")
                return False
    return True


def _common_divisor_variable(sets: List[set]) -> bool:
    """是否有一个变量整除所有给定单项式"""
    monomials = [m for s in sets for m in s]
    if not monomials:
        return False
    return any(all(m[v] > 0 for m in monomials) for v in range(len(monomials[0])))


def _local_type(family: WCIFamily, r: int, coords: Sequence[int]) -> Tuple[int, int]:
    """读取层上点的局部类型 1/r(1,a,r-a)"""
    residues = [w % r for i, w in enumerate(family.weights) if i not in coords]
    residues += [0] * (len(coords) - 1)
    for d in family.degrees:
        target = d % r
        if target not in residues:
            raise AmbiguousStratum(f"层 I_{r} 上无法消去次数 {d} 的方向", family.family_no, 'basket')
        residues.remove(target)
    if len(residues) != 3 or any(v == 0 for v in residues):
        raise AmbiguousStratum(f"层 I_{r} 上局部类型不是孤立商奇点: {residues}",
                               family.family_no, 'basket')
    units = [v for v in residues if gcd(v, r) == 1]
    if not units:
        raise AmbiguousStratum(f"层 I_{r} 上没有与 r 互素的权重: {residues}", family.family_no, 'basket')
    for unit in units:
        inverse = pow(unit, -1, r)
        normalized = sorted((v * inverse) % r for v in residues)
        if normalized[0] == 1 and (normalized[1] + normalized[2]) % r == 0 and gcd(normalized[1], r) == 1:
            return r, min(normalized[1], r - normalized[1])
    raise AmbiguousStratum(f"层 I_{r} 上的奇点不是终端型: 1/{r}{tuple(sorted(residues))}",
                           family.family_no, 'basket')


def _stratum_solve(family: WCIFamily, r: int, coords: Tuple[int, ...]) -> Tuple[Fraction, bool]:
    """返回 (Σ 1/|稳定子| 的总量, 是否为0维层)"""
    weights = family.weights
    sub = [weights[i] for i in coords]
    supports = [monomials_of_degree(d, sub) for d in family.degrees]
    nonempty = [d for d, s in zip(family.degrees, supports) if s]
    dim = len(coords) - 1 - len(nonempty)
    if len(coords) >= 2 and not nonempty:
        raise AmbiguousStratum(f"层 I_{r}={coords} 整体落在 X 上", family.family_no, 'basket')
    if dim > 0:
        raise AmbiguousStratum(f"层 I_{r}={coords} 与 X 的交不是有限集", family.family_no, 'basket')
    if dim == 0:
        if len(coords) == 3 and _common_divisor_variable([s for s in supports if s]):
            raise AmbiguousStratum(f"层 I_{r}={coords} 上两个限制方程有公共因子",
                                   family.family_no, 'basket')
        return Fraction(prod(nonempty), prod(sub)), True
    # 超定情形：只剩下落在 X 上的坐标点
    total = Fraction(0)
    for i in coords:
        if all(d % weights[i] != 0 for d in family.degrees):
            total += Fraction(1, weights[i])
    return total, False


def _stratified_counts(family: WCIFamily):
    counts: Dict[int, int] = {}
    strata = _singular_strata(family.weights)
    checksums: List[StratumChecksum] = []
    for r, coords in strata:
        total, zero_dim = _stratum_solve(family, r, coords)
        deeper = sum((Fraction(n, g) for g, n in counts.items() if g % r == 0 and g != r), Fraction(0))
        count = r * (total - deeper)
        if count.denominator != 1 or count < 0:
            raise NonIntegralCount(f"层 I_{r} 上的点数 {count} 不是非负整数", family.family_no, 'basket')
        counts[r] = int(count)
        logger.debug(f"No.{family.family_no} 层 I_{r}={coords}: Σ={total}, 稳定子恰为 μ_{r} 的点 {count} 个")
        if zero_dim:
            point_sum = sum((Fraction(n, g) for g, n in counts.items() if g % r == 0), Fraction(0))
            checksums.append(StratumChecksum(
                r=r, coords=coords, weights=tuple(family.weights[i] for i in coords),
                bezout=total, point_sum=point_sum,
                counts={g: n for g, n in counts.items() if g % r == 0 and n}))
    return strata, counts, checksums


def compute_basket(family: WCIFamily) -> Basket:
    """分层计算一般成员的奇点篮"""
    strata, counts, _ = _stratified_counts(family)
    singularities = []
    for r, coords in strata:
        if counts.get(r):
            r_, a = _local_type(family, r, coords)
            singularities.append(QuotientSingularity(r_, a, counts[r]))
    return Basket(Basket(tuple(singularities)).canonical())


def stratum_checksums(family: WCIFamily) -> List[StratumChecksum]:
    """每个0维奇异层的轨形 Bézout 校验"""
    return _stratified_counts(family)[2]


def detect_distinguished(family: WCIFamily) -> List[DistinguishedConfig]:
    """按坐标翻转曲线配置搜索特殊奇点，x 固定为第0个坐标"""
    weights = family.weights
    others = range(1, len(weights))
    configs: List[DistinguishedConfig] = []
    seen = set()
    for k in others:
        a_k = weights[k]
        if family.d1 % a_k == 0 or k in seen:
            continue
        for j1 in others:
            if j1 == k or a_k + weights[j1] != family.d1:
                continue
            for j2 in others:
                if j2 in (k, j1) or a_k + weights[j2] != family.d2:
                    continue
                # x_k^2 of degree d2 只在 x_{j2} 与 x_k 同权时允许
                if family.d2 % a_k == 0 and weights[j2] != a_k:
                    continue
                rest = sorted((i for i in others if i not in (k, j1, j2)), key=lambda i: (weights[i], i))
                if len(rest) != 2:
                    continue
                i1, i2 = rest
                if weights[i1] < weights[i2] < a_k and k not in seen:
                    configs.append(DistinguishedConfig(k, j1, j2, i1, i2))
                    seen.add(k)
    return configs


def kawamata_table(family: WCIFamily, basket: Optional[Basket] = None) -> List[Dict]:
    """篮中每种奇点的权积与 Kawamata 胀开次数"""
    basket = basket if basket is not None else compute_basket(family)
    A3 = anticanonical_degree(family)
    rows = []
    for s in basket.canonical():
        rows.append({
            "type": s.label(),
            "count": s.count,
            "marks": sorted(s.marks),
            "wp": weight_product(s),
            "B3": kawamata_degree(A3, s),
        })
    return rows
