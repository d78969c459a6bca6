# -*- coding: utf-8 -*-
"""
LCT 判据检查 - exclL / exclG / criwisol 的精确数值检验

每个检查返回 CriterionCheck，记录全部输入、结论和非数值假设。
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Union

from services.exact_arith import rational_str

logger = logging.getLogger(__name__)

PASS, FAIL, NOT_APPLICABLE = 'pass', 'fail', 'not_applicable'
VERDICTS = (PASS, FAIL, NOT_APPLICABLE)

LC_ASSUMPTION = "pair (X, S/c1) log canonical at p (generality)"
NE_ASSUMPTION = "(-K_Y)^2 not in Int NE(Y) (external)"
REDUCED_ASSUMPTION = "flopping locus consists of e reduced points (generality)"
NORMAL_T1_ASSUMPTION = "T1 normal, nonsingular along the flopping curves off p (generality)"

Number = Union[int, Fraction]


@dataclass
class CriterionCheck:
    lemma_id: str
    inputs: Dict[str, Any]
    verdict: str
    assumed: List[str] = field(default_factory=list)
    detail: str = ''
    anomalous: bool = False

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"未知的检查结论: {self.verdict}")

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def to_dict(self) -> Dict[str, Any]:
        inputs = {}
        for key, value in self.inputs.items():
            if isinstance(value, Fraction):
                inputs[key] = rational_str(value)
            elif isinstance(value, (list, tuple)):
                inputs[key] = [rational_str(v) if isinstance(v, Fraction) else v for v in value]
            else:
                inputs[key] = value
        return {
            "lemma": self.lemma_id,
            "inputs": inputs,
            "verdict": self.verdict,
            "detail": self.detail,
            "assumed": list(self.assumed),
            "anomalous": self.anomalous,
        }


def _verdict(ok: bool) -> str:
    return PASS if ok else FAIL


def check_exclL(r: int, c1: Number, c2: Number, A3: Fraction, mult_cover: int,
                lc_S1_assumed: bool = True) -> CriterionCheck:
    """r c1 c2 (A^3) ≤ 1 且 0 < mult ≤ c2"""
    c1, c2, A3 = Fraction(c1), Fraction(c2), Fraction(A3)
    value = r * c1 * c2 * A3
    ok_degree = value <= 1
    ok_mult = 0 < mult_cover <= c2
    reasons = []
    if not ok_degree:
        reasons.append(f"r·c1·c2·A3 = {value} > 1")
    if not ok_mult:
        reasons.append(f"mult = {mult_cover} > c2 = {c2}")
    if not lc_S1_assumed:
        reasons.append("log canonicity of (X, S1) not assumed")
    return CriterionCheck(
        lemma_id='exclL',
        inputs={"r": r, "c1": c1, "c2": c2, "A3": A3, "mult": mult_cover, "value": value},
        verdict=_verdict(ok_degree and ok_mult and lc_S1_assumed),
        assumed=[LC_ASSUMPTION] if lc_S1_assumed else [],
        detail='; '.join(reasons) or f"{value} ≤ 1, {mult_cover} ≤ {c2}",
    )


def check_exclG(c1: Number, c2: Optional[Number], l: int, A3: Fraction,
                variant: str = 'lc_divisor') -> CriterionCheck:
    """变体 two_divisors: max(c1,c2)·l·A3 ≤ 1；变体 lc_divisor: c·l·A3 ≤ 1"""
    c1, A3 = Fraction(c1), Fraction(A3)
    if variant == 'two_divisors':
        if c2 is None:
            raise ValueError("two_divisors 变体需要 c2")
        c = max(c1, Fraction(c2))
        assumed = []
    elif variant == 'lc_divisor':
        c = c1
        assumed = [LC_ASSUMPTION]
    else:
        raise ValueError(f"未知的 exclG 变体: {variant}")
    value = c * l * A3
    inputs = {"c1": c1, "l": l, "A3": A3, "variant": variant, "value": value}
    if c2 is not None:
        inputs["c2"] = Fraction(c2)
    return CriterionCheck(
        lemma_id='exclG', inputs=inputs, verdict=_verdict(value <= 1), assumed=assumed,
        detail=f"{value} {'≤' if value <= 1 else '>'} 1",
    )


def check_criwisol(c: Number, l: int, d: Fraction, m: int, A3: Fraction) -> CriterionCheck:
    """(a) l d ≤ m 且 c m A3 ≤ d；(b) l d > m 且 c l A3 ≤ 1"""
    c, d, A3 = Fraction(c), Fraction(d), Fraction(A3)
    ld = l * d
    if ld <= m:
        branch, value, bound = 'a', c * m * A3, d
    else:
        branch, value, bound = 'b', c * l * A3, Fraction(1)
    ok = value <= bound
    return CriterionCheck(
        lemma_id='criwisol',
        inputs={"c": c, "l": l, "d": d, "m": m, "A3": A3, "ld": ld, "branch": branch, "value": value},
        verdict=_verdict(ok),
        assumed=[LC_ASSUMPTION],
        detail=f"branch ({branch}): {value} {'≤' if ok else '>'} {bound}",
    )


def criwisol_outcome(check: CriterionCheck) -> str:
    """'pass(a)' / 'pass(b)' / 'fail'"""
    if check.lemma_id != 'criwisol':
        raise ValueError("不是 criwisol 检查")
    return f"pass({check.inputs['branch']})" if check.passed else FAIL


def recheck(check: CriterionCheck) -> str:
    """仅凭记录的输入重新计算结论"""
    p = check.inputs
    if check.lemma_id == 'exclL':
        ok = p["r"] * p["c1"] * p["c2"] * p["A3"] <= 1 and 0 < p["mult"] <= p["c2"]
        return _verdict(ok and LC_ASSUMPTION in check.assumed)
    if check.lemma_id == 'exclG':
        c = max(p["c1"], p["c2"]) if p["variant"] == 'two_divisors' else p["c1"]
        return _verdict(c * p["l"] * p["A3"] <= 1)
    if check.lemma_id == 'criwisol':
        if p["l"] * p["d"] <= p["m"]:
            return _verdict(p["c"] * p["m"] * p["A3"] <= p["d"])
        return _verdict(p["c"] * p["l"] * p["A3"] <= 1)
    if check.lemma_id == 'lctfflopcurve':
        if not p["e_integral"]:
            return FAIL
        return PASS if p["wp"] >= p["d1"] else NOT_APPLICABLE
    if check.lemma_id == 'singptNE':
        return _verdict(p["B3"] <= 0 and p["weight_ok"])
    if check.lemma_id == 'somedistsingpt':
        return _verdict(p["upsilon"] and p["value"] <= 2)
    raise ValueError(f"无法复核的检查: {check.lemma_id}")
