# -*- coding: utf-8 -*-
"""
有限域随机 Jacobian 证伪器

在 31 位素数域上随机取一般成员，在整体落在成员上的坐标层中随机取点，
计算 Jacobian 的秩。秩不足即找到锥上原点以外的奇点。
"""

import logging
import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

import sympy
from sympy import Poly
from sympy.polys.domains import GF
from sympy.polys.matrices import DomainMatrix

from config import Config
from services.exact_arith import has_monomial, monomials_of_degree

logger = logging.getLogger(__name__)


@dataclass
class FalsifierResult:
    weights: Tuple[int, ...]
    degrees: Tuple[int, ...]
    members: int
    singular_members: int = 0
    witnesses: List[Tuple[Tuple[int, ...], Tuple[int, ...]]] = field(default_factory=list)

    @property
    def flagged(self) -> bool:
        """至少 3 个随机成员（或全部成员）找到奇点"""
        return self.singular_members >= min(3, self.members)


def contained_strata(weights: Sequence[int], degrees: Sequence[int]) -> List[Tuple[int, ...]]:
    """所有方程限制后恒为零的坐标子集"""
    strata = []
    for size in range(1, len(weights) + 1):
        for subset in combinations(range(len(weights)), size):
            sub = [weights[i] for i in subset]
            if not any(has_monomial(d, sub) for d in degrees):
                strata.append(subset)
    return strata


def random_member(weights: Sequence[int], degrees: Sequence[int], prime: int,
                  rng: random.Random) -> Tuple[List[Poly], Tuple[sympy.Symbol, ...]]:
    gens = sympy.symbols(f'x0:{len(weights)}')
    polys = []
    for d in degrees:
        terms = {exp: rng.randrange(1, prime) for exp in sorted(monomials_of_degree(d, weights))}
        if terms:
            polys.append(Poly.from_dict(terms, *gens, modulus=prime))
        else:
            polys.append(Poly(0, *gens, modulus=prime))
    return polys, gens


def jacobian(polys: List[Poly], gens) -> List[List[Optional[Poly]]]:
    """偏导数矩阵，零多项式的行记为 None"""
    return [[None if f.is_zero else f.diff(g) for g in gens] for f in polys]


def jacobian_rank(derivatives: List[List[Optional[Poly]]], gens, point: Sequence[int], prime: int) -> int:
    field_ = GF(prime)
    values = dict(zip(gens, point))
    rows = []
    for row_polys in derivatives:
        row = []
        for df in row_polys:
            value = 0 if df is None or df.is_zero else df.eval(values)
            row.append(field_(int(value) % prime))
        rows.append(row)
    return DomainMatrix(rows, (len(rows), len(gens)), field_).rank()


def falsify(weights: Sequence[int], degrees: Sequence[int], members: Optional[int] = None,
            prime: Optional[int] = None, seed: Optional[int] = None,
            samples_per_stratum: int = 2) -> FalsifierResult:
    """对一般成员做随机证伪"""
    members = members or Config.FALSIFIER_MEMBERS
    prime = prime or Config.FALSIFIER_PRIME
    rng = random.Random(Config.FALSIFIER_SEED if seed is None else seed)
    result = FalsifierResult(weights=tuple(weights), degrees=tuple(degrees), members=members)
    strata = contained_strata(weights, degrees)
    for _ in range(members):
        polys, gens = random_member(weights, degrees, prime, rng)
        derivatives = jacobian(polys, gens)
        found = None
        for subset in strata:
            for _ in range(samples_per_stratum):
                point = tuple(rng.randrange(1, prime) if i in subset else 0 for i in range(len(weights)))
                if jacobian_rank(derivatives, gens, point, prime) < len(polys):
                    found = (subset, point)
                    break
            if found:
                break
        if found:
            result.singular_members += 1
            result.witnesses.append(found)
    logger.debug(f"证伪器 {tuple(weights)} {tuple(degrees)}: {result.singular_members}/{members} 个成员找到奇点")
    return result
