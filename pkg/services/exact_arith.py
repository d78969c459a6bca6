# -*- coding: utf-8 -*-
"""
精确算术 - 有理数、二元数值半群、加权次数单项式枚举

全部数值使用 fractions.Fraction，不出现浮点数。
"""

import logging
from fractions import Fraction
from math import gcd
from typing import Iterable, List, Sequence, Set, Tuple, Union

logger = logging.getLogger(__name__)

Rational = Fraction
ExponentVector = Tuple[int, ...]
Scalar = Union[int, Fraction]


def to_rational(value: Union[int, str, Fraction]) -> Fraction:
    """把整数、"p/q" 字符串或 Fraction 转为既约有理数"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("布尔值不能作为有理数")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"不支持的有理数输入: {value!r}")


def rational_str(value: Scalar) -> str:
    """序列化为 "p/q"（整数时为 "p"）"""
    return str(Fraction(value))


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def semigroup_contains(a: int, b: int, x: int) -> bool:
    """x 是否属于 ⟨a,b⟩ = {ma+nb | m,n ≥ 0, (m,n) ≠ (0,0)}"""
    if a < 1 or b < 1 or x < 1:
        return False
    for m in range(x // a + 1):
        rest = x - m * a
        if rest % b == 0 and (m, rest // b) != (0, 0):
            return True
    return False


def semigroup_min_multiple(a0: int, a1: int, ai: int) -> int:
    """最小的 k > 0 使 k·ai ∈ ⟨a0,a1⟩；k = a0 总满足"""
    k = 1
    while not semigroup_contains(a0, a1, k * ai):
        k += 1
    return k


def monomials_of_degree(d: int, weights: Sequence[int]) -> Set[ExponentVector]:
    """加权次数恰为 d 的全部指数向量，按有界字典序递归枚举"""
    if not weights:
        raise ValueError("权重列表不能为空")
    weights = list(weights)
    result: Set[ExponentVector] = set()

    def _walk(index: int, remaining: int, prefix: List[int]):
        if index == len(weights) - 1:
            if remaining % weights[index] == 0:
                result.add(tuple(prefix + [remaining // weights[index]]))
            return
        for e in range(remaining // weights[index] + 1):
            _walk(index + 1, remaining - e * weights[index], prefix + [e])

    if d >= 0:
        _walk(0, d, [])
    return result


def weighted_degree(exponents: Iterable[int], weights: Sequence[int]) -> int:
    return sum(e * w for e, w in zip(exponents, weights))


def has_monomial(d: int, weights: Sequence[int]) -> bool:
    """是否存在次数为 d 的单项式（不枚举全部）"""
    if d < 0:
        return False
    if not weights:
        return d == 0
    head, tail = weights[0], weights[1:]
    return any(has_monomial(d - e * head, tail) for e in range(d // head + 1))
