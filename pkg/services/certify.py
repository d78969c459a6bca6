# -*- coding: utf-8 -*-
"""
证书服务 - 分类、逐点类 LCT 证书组装与超刚性检查
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from config import Config
from services.criterion import (NE_ASSUMPTION, CriterionCheck, PASS, FAIL,
                                check_criwisol, check_exclG, check_exclL)
from services.exact_arith import rational_str
from services.floplocus import config_wp, flop_prop_applicable, upsilon_boundary_check
from services.isolating import stratum_entry_problems
from services.lxy import lxy_mult_at
from services.wps_model import (DistinguishedConfig, QuotientSingularity, WCIFamily, WeightedSpace,
                                anticanonical_degree, detect_distinguished, kawamata_degree,
                                quasismooth_hypersurface, wellformed)
from utils.exceptions import IncompleteData, NoMatchingFamily, NonPositiveDPrime
from utils.family_db import FamilyDB, FamilyRecord

logger = logging.getLogger(__name__)

F_I, F_II, OTHER = 'F(i)', 'F(ii)', 'other'
LCT_EQUALS_1 = 'lct_equals_1'
LCT_ON_XCIRC = 'lct_on_Xcirc_equals_1'
INCOMPLETE = 'incomplete'

# 各子类在 L_xy 之外必须覆盖的区域
REQUIRED_REGIONS = {
    'iia': ('off_Hx', 'Hx_minus_Lxy'),
    'iib': ('off_Lxy',),
    'iic': ('off_Hx', 'Hx_minus_Lxy'),
}

KSTABILITY_COROLLARY = ("alpha(X) = 1 > 3/4: a general member is K-stable and admits "
                        "a Kähler-Einstein metric (cited, not computed)")


def check_singptNE_numeric(family: WCIFamily, s: QuotientSingularity) -> CriterionCheck:
    """未标记奇点：Kawamata 胀开后 (B^3) ≤ 0，且存在权重 a_j < r 属于 {1, a, r-a}"""
    A3 = anticanonical_degree(family)
    B3 = kawamata_degree(A3, s)
    allowed = {1, s.a, s.r - s.a}
    witness = next((w for w in family.weights if w < s.r and w in allowed), None)
    weight_ok = witness is not None
    ok = B3 <= 0 and weight_ok
    detail = f"B3 = {B3}" + (f", 权重 {witness} ∈ {{1, a, r-a}}" if weight_ok else ", 没有合适的权重")
    return CriterionCheck(
        lemma_id='singptNE',
        inputs={"r": s.r, "a": s.a, "A3": A3, "B3": B3, "weight_ok": weight_ok, "weight": witness},
        verdict=PASS if ok else FAIL,
        assumed=[NE_ASSUMPTION],
        detail=detail,
    )


def check_somedistsingpt(config: DistinguishedConfig, family: WCIFamily) -> CriterionCheck:
    """H_x ∩ Υ_p = {p} 且 a_k a_j2 (A^3) ≤ 2"""
    A3 = anticanonical_degree(family)
    a_k, a_j2 = family.a(config.k), family.a(config.j2)
    upsilon = upsilon_boundary_check(config, family)
    value = a_k * a_j2 * A3
    ok = upsilon and value <= 2
    return CriterionCheck(
        lemma_id='somedistsingpt',
        inputs={"a_k": a_k, "a_j2": a_j2, "A3": A3, "upsilon": upsilon, "value": value},
        verdict=PASS if ok else FAIL,
        detail=f"a_k·a_j2·A3 = {value}" + ("" if upsilon else ", H_x ∩ Υ_p ≠ {p}"),
    )


def classification_numbers(family: WCIFamily,
                           configs: Optional[List[DistinguishedConfig]] = None) -> Dict[str, Any]:
    A3 = anticanonical_degree(family)
    configs = detect_distinguished(family) if configs is None else configs
    return {
        "A3": A3,
        "a1a5A3": family.a(1) * family.a(5) * A3,
        "a1a3A3": family.a(1) * family.a(3) * A3,
        "points": [{"point": c.point_name(family), "type": c.singularity(family).label(),
                    "a_k": family.a(c.k), "wp": config_wp(c, family), "d1": family.d1}
                   for c in configs],
    }


def classify_family(family: WCIFamily, configs: Optional[List[DistinguishedConfig]] = None) -> str:
    numbers = classification_numbers(family, configs)
    if numbers["a1a5A3"] <= 1:
        return F_I
    if numbers["a1a5A3"] <= 2 and numbers["a1a3A3"] <= 1:
        top = family.a(5)
        if all(p["wp"] >= p["d1"] for p in numbers["points"] if p["a_k"] == top):
            return F_II
    return OTHER


@dataclass
class PointClassResult:
    stratum: str
    check: CriterionCheck
    status: str = 'checked'  # checked / open / anomalous

    def to_dict(self) -> Dict[str, Any]:
        data = self.check.to_dict()
        data["stratum"] = self.stratum
        data["status"] = self.status
        return data


@dataclass
class FamilyCertificate:
    family_no: int
    label: str
    classification: str
    A3: Fraction
    point_class_results: List[PointClassResult] = field(default_factory=list)
    verdict: str = INCOMPLETE
    open_points: List[str] = field(default_factory=list)
    anomalies: List[str] = field(default_factory=list)
    assumptions: List[str] = field(default_factory=list)
    corollaries: List[str] = field(default_factory=list)

    def failing(self) -> List[PointClassResult]:
        return [r for r in self.point_class_results
                if r.status == 'checked' and not r.check.passed]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "family": self.family_no,
            "label": self.label,
            "classification": self.classification,
            "A3": rational_str(self.A3),
            "verdict": self.verdict,
            "open_points": list(self.open_points),
            "anomalies": list(self.anomalies),
            "assumptions": list(self.assumptions),
            "corollaries": list(self.corollaries),
            "checks": [r.to_dict() for r in self.point_class_results],
        }


def _required_regions(record: FamilyRecord, classification: str) -> Tuple[str, ...]:
    if classification == F_I:
        return ('off_Lxy',) if record.family.a(1) == 1 else ('Hx_minus_Lxy', 'off_Hx')
    return REQUIRED_REGIONS.get(record.subclass, ())


def _stratum_check(entry, A3: Fraction) -> CriterionCheck:
    isolating = entry.isolating_class
    if entry.check == 'criwisol':
        if isolating.kind != 'curve':
            raise IncompleteData(f"{entry.stratum_id} 缺少曲线数据", entry.family_no, 'strata')
        curve = isolating.curve_data
        check = check_criwisol(entry.divisor_c, isolating.l, curve.degree_AG, curve.mult, A3)
    else:
        check = check_exclG(entry.divisor_c, None, isolating.l, A3, variant='lc_divisor')
    # 条目只对 scope 描述的点成立
    if entry.scope:
        check.assumed.append(entry.scope)
    return check


def certify_family(record: FamilyRecord) -> FamilyCertificate:
    family = record.family
    no = family.family_no
    A3 = anticanonical_degree(family)
    configs = detect_distinguished(family)
    classification = classify_family(family, configs)
    if classification == OTHER:
        raise IncompleteData("该族不属于 F(i) 或 F(ii)，没有证书路线", no, 'class')
    if record.lxy is None:
        raise IncompleteData("缺少 L_xy 记录", no, 'lxy')
    regions = {entry.stratum_id.split('/')[0] for entry in record.strata}
    missing = [r for r in _required_regions(record, classification) if r not in regions]
    if missing or not record.strata:
        raise IncompleteData(f"缺少分层条目: {missing or '全部'}", no, 'strata')

    cert = FamilyCertificate(family_no=no, label=family.label(), classification=classification, A3=A3)
    a1 = family.a(1)

    def add(stratum: str, check: CriterionCheck, open_point: Optional[str] = None):
        status = 'checked'
        if open_point is not None:
            status = 'open'
            cert.open_points.append(open_point)
        elif not check.passed and stratum in record.anomalies:
            check.anomalous = True
            status = 'anomalous'
            cert.anomalies.append(f"{stratum}: {record.anomalies[stratum]}")
            logger.warning(f"No.{no} {stratum}: {check.detail}（已记录的异常）")
        cert.point_class_results.append(PointClassResult(stratum, check, status))

    # L_xy 上的光滑点
    add("Lxy/nonsingular", check_exclL(1, 1, a1, A3, 1))

    # L_xy 之外的光滑点
    for entry in record.strata:
        problems = stratum_entry_problems(entry, family)
        if problems:
            raise IncompleteData(f"{entry.stratum_id}: {'; '.join(problems)}", no, 'strata')
        add(f"nonsingular/{entry.stratum_id}", _stratum_check(entry, A3))

    # 翻转曲线上的点
    if classification == F_II:
        for config in configs:
            add(f"flop/{config.point_name(family)}", flop_prop_applicable(config, family))

    # 未标记奇点
    for entry in record.basket:
        s = entry.singularity
        if not s.marks:
            add(f"singular/{s.label()}", check_singptNE_numeric(family, s))

    # QI / EI 奇点
    for entry in record.basket:
        s = entry.singularity
        for mark in ('QI', 'EI'):
            if mark not in s.marks:
                continue
            if len(entry.points) != s.count:
                raise IncompleteData(f"{s.label()}_{mark} 需要 {s.count} 个坐标点", no, 'basket')
            for point in entry.points:
                mult = lxy_mult_at(record.lxy, point).mult
                add(f"{mark}/{point}", check_exclL(s.r, 1, a1, A3, mult))

    # 特殊奇点
    for config in configs:
        point = config.point_name(family)
        s = config.singularity(family)
        if classification == F_I:
            mult = lxy_mult_at(record.lxy, point).mult
            add(f"distinguished/{point}", check_exclL(family.a(config.k), 1, a1, A3, mult))
            continue
        check = check_somedistsingpt(config, family)
        if check.passed:
            add(f"distinguished/{point}", check)
        else:
            add(f"distinguished/{point}", check, open_point=f"{point} {s.label()}")

    if cert.failing():
        cert.verdict = INCOMPLETE
        for r in cert.failing():
            logger.warning(f"No.{no} {r.stratum}: {r.check.lemma_id} 未通过 ({r.check.detail})")
    elif cert.open_points:
        cert.verdict = LCT_ON_XCIRC
    else:
        cert.verdict = LCT_EQUALS_1
        cert.corollaries.append(KSTABILITY_COROLLARY)

    assumed = []
    for r in cert.point_class_results:
        for a in r.check.assumed:
            if a not in assumed:
                assumed.append(a)
    witness = record.lxy.irr_witness
    assumed.append(f"L_xy irreducible, witness {witness}" if witness else "L_xy irreducible (recorded)")
    assumed.extend(a for a in record.assumptions if a not in assumed)
    cert.assumptions = assumed
    logger.debug(f"No.{no}: {classification} → {cert.verdict}")
    return cert


# ---------- 超刚性 ----------

@dataclass
class SuperrigidReport:
    degree: int
    weights: Tuple[int, ...]
    d_prime: int
    family_no: int
    checks: Dict[str, bool]
    reasons: List[str] = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return not self.reasons

    def to_dict(self) -> Dict[str, Any]:
        return {
            "septuple": f"{self.degree};{','.join(str(w) for w in self.weights)}",
            "d_prime": self.d_prime,
            "family": self.family_no,
            "checks": dict(self.checks),
            "status": "certified" if self.certified else "uncertified",
            "reasons": list(self.reasons),
        }


def parse_septuple(text: str) -> Tuple[int, Tuple[int, ...]]:
    """解析 "d;a0,a1,a2,a3,a4,a5" """
    try:
        head, tail = text.split(';')
        d = int(head.strip())
        weights = tuple(int(w.strip()) for w in tail.split(','))
    except ValueError:
        raise ValueError(f"七元组格式应为 d;a0,...,a5: {text!r}")
    if len(weights) != 6 or d < 1 or any(w < 1 for w in weights):
        raise ValueError(f"七元组需要一个正次数和六个正权重: {text!r}")
    return d, weights


def superrigid_check(septuple: Tuple[int, Sequence[int]], db: FamilyDB) -> SuperrigidReport:
    d, weights = septuple
    weights = tuple(sorted(int(w) for w in weights))
    if len(weights) != 6:
        raise ValueError(f"需要六个权重: {weights}")
    d_prime = sum(weights) - 1 - d
    if d_prime < 1:
        raise NonPositiveDPrime(f"d' = {sum(weights)} - 1 - {d} = {d_prime}", field='septuple')
    record = db.find(weights, (d, d_prime))
    if record is None:
        raise NoMatchingFamily(f"没有族 X_{{{min(d, d_prime)},{max(d, d_prime)}}} ⊂ P{weights}",
                               field='septuple')
    space = WeightedSpace.from_weights(weights)
    checks = {
        "lct_equals_1_family": record.family_no in Config.THEOREM_LCT1_FAMILIES,
        "quasismooth": quasismooth_hypersurface(d, space),
        "wellformed": wellformed(space, (d,)),
    }
    reasons = []
    if not checks["lct_equals_1_family"]:
        reasons.append(f"No.{record.family_no} 不在全局 lct = 1 的族中")
    if not checks["quasismooth"]:
        reasons.append(f"次数 {d} 的超曲面不拟光滑")
    if not checks["wellformed"]:
        reasons.append(f"次数 {d} 的超曲面不良构")
    report = SuperrigidReport(degree=d, weights=weights, d_prime=d_prime,
                              family_no=record.family_no, checks=checks, reasons=reasons)
    logger.debug(f"超刚性 ({d};{weights}) → No.{record.family_no}: {report.to_dict()['status']}")
    return report
