#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
族数据库 - JSON 文档的读取、校验与序列化
"""

import json
import logging
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from services.isolating import (CHECKS, CURVE_FORMULAS, LEMMA_TAGS, RECIPES, StratumEntry,
                                entry_from_record)
from services.lxy import LxyCondition, LxyRecord, lxy_problems, parse_terms
from services.wps_model import (CLASS_TAGS, POINT_MARKS, Basket, DistinguishedConfig,
                                QuotientSingularity, WCIFamily)
from utils.exceptions import CrossRefError, ParseError, SchemaError

logger = logging.getLogger(__name__)

VERDICTS = ('lct_equals_1', 'lct_on_Xcirc_equals_1', 'incomplete')
SUBCLASSES = ('i', 'iia', 'iib', 'iic')
LXY_VARIABLES = ('z', 's', 't', 'u')


@dataclass(frozen=True)
class BasketEntry:
    singularity: QuotientSingularity
    points: Tuple[str, ...] = ()


@dataclass
class FamilyRecord:
    """数据库中一个族的全部记录"""
    family: WCIFamily
    A3: Fraction
    basket: List[BasketEntry]
    strata: List[StratumEntry] = field(default_factory=list)
    lxy: Optional[LxyRecord] = None
    distinguished: List[DistinguishedConfig] = field(default_factory=list)
    assumptions: List[str] = field(default_factory=list)
    anomalies: Dict[str, str] = field(default_factory=dict)
    expected_verdict: str = 'incomplete'
    subclass: str = ''
    notes: str = ''

    @property
    def family_no(self) -> int:
        return self.family.family_no

    @property
    def recorded_basket(self) -> Basket:
        return Basket(tuple(e.singularity for e in self.basket))

    def marked_entries(self, mark: str) -> List[BasketEntry]:
        return [e for e in self.basket if mark in e.singularity.marks]


@dataclass
class FamilyDB:
    version: str
    families: Dict[int, FamilyRecord]
    document: Dict[str, Any]
    source: str = ''

    def numbers(self) -> List[int]:
        return sorted(self.families)

    def get(self, family_no: int) -> FamilyRecord:
        if family_no not in self.families:
            raise KeyError(f"数据库中没有族 No.{family_no}")
        return self.families[family_no]

    def records(self) -> List[FamilyRecord]:
        return [self.families[n] for n in self.numbers()]

    def find(self, weights: Sequence[int], degrees: Sequence[int]) -> Optional[FamilyRecord]:
        key = (tuple(sorted(weights)), tuple(sorted(degrees)))
        for record in self.records():
            if (record.family.weights, record.family.degrees) == key:
                return record
        return None


# ---------- 结构校验 ----------

def _is_int(value) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _int_list(value, length: Optional[int] = None, positive: bool = True) -> bool:
    if not isinstance(value, list) or (length is not None and len(value) != length):
        return False
    return all(_is_int(v) and (v > 0 or not positive) for v in value)


def _rational(value) -> bool:
    try:
        Fraction(str(value))
        return True
    except (ValueError, ZeroDivisionError):
        return False


def _basket_violations(where: str, basket) -> List[str]:
    if not isinstance(basket, list):
        return [f"{where}: basket 必须是列表"]
    violations = []
    for n, item in enumerate(basket):
        path = f"{where}: basket[{n}]"
        if not isinstance(item, dict) or not all(_is_int(item.get(k)) for k in ('r', 'a', 'count')):
            violations.append(f"{path}: 需要整数 r, a, count")
            continue
        marks = item.get('marks', [])
        if not isinstance(marks, list) or any(m not in POINT_MARKS for m in marks):
            violations.append(f"{path}: marks 只能取 {list(POINT_MARKS)}")
        if not isinstance(item.get('points', []), list):
            violations.append(f"{path}: points 必须是列表")
    return violations


def _strata_violations(where: str, strata) -> List[str]:
    if not isinstance(strata, list):
        return [f"{where}: strata 必须是列表"]
    violations = []
    for n, item in enumerate(strata):
        path = f"{where}: strata[{n}]"
        if not isinstance(item, dict) or not isinstance(item.get('id'), str) \
                or not isinstance(item.get('lemma'), str) or not _is_int(item.get('l')):
            violations.append(f"{path}: 需要 id, lemma, 整数 l")
            continue
        if 'c' in item and not _rational(item['c']):
            violations.append(f"{path}: c 不是有理数")
        if item.get('recipe', 'recorded') not in RECIPES:
            violations.append(f"{path}: recipe: 未知配方 {item['recipe']!r}")
        if item.get('check', 'exclG') not in CHECKS:
            violations.append(f"{path}: check: 未知判据 {item['check']!r}")
        if not isinstance(item.get('scope', ''), str):
            violations.append(f"{path}: scope 必须是字符串")
        curve = item.get('curve')
        if curve is not None and (not isinstance(curve, dict)
                                  or not all(_is_int(curve.get(k)) for k in ('d_num', 'd_den'))):
            violations.append(f"{path}: curve 需要整数 d_num, d_den")
        elif curve is not None and curve.get('formula', 'explicit') not in CURVE_FORMULAS:
            violations.append(f"{path}: curve.formula: 未知公式 {curve['formula']!r}")
    return violations


def _point_list_violations(path: str, items) -> List[str]:
    if not isinstance(items, list):
        return [f"{path}: 必须是列表"]
    bad = [i for i in items if not isinstance(i, dict) or not isinstance(i.get('point'), str)
           or not _is_int(i.get('mult')) or i['mult'] < 1]
    return [f"{path}: 条目需要 point 与正整数 mult"] if bad else []


def _lxy_violations(where: str, lxy) -> List[str]:
    if not isinstance(lxy, dict):
        return [f"{where}: lxy 必须是对象"]
    violations = []
    if lxy.get('vars', list(LXY_VARIABLES)) != list(LXY_VARIABLES):
        violations.append(f"{where}: lxy.vars 必须是 {list(LXY_VARIABLES)}")
    for key in ('g1', 'g2'):
        try:
            parse_terms(lxy.get(key), len(LXY_VARIABLES), f"{where}: lxy.{key}")
        except SchemaError as e:
            violations.extend(e.violations)
    violations.extend(_point_list_violations(f"{where}: lxy.sing", lxy.get('sing', [])))
    violations.extend(_point_list_violations(f"{where}: lxy.cover_singular", lxy.get('cover_singular', [])))
    for n, cond in enumerate(lxy.get('conds', [])):
        if not isinstance(cond, dict) or not isinstance(cond.get('text'), str):
            violations.append(f"{where}: lxy.conds[{n}]: 需要 text")
        elif 'exp' in cond and not _int_list(cond['exp'], len(LXY_VARIABLES), positive=False):
            violations.append(f"{where}: lxy.conds[{n}]: exp 必须是 4 个非负整数")
    return violations


def _family_violations(block) -> List[str]:
    if not isinstance(block, dict) or not _is_int(block.get('no')):
        return ["families[]: 每个族需要整数 no"]
    where = f"family {block['no']}"
    violations = []
    if not _int_list(block.get('weights'), 6):
        violations.append(f"{where}: weights: 必须是 6 个正整数")
    if not _int_list(block.get('degrees'), 2):
        violations.append(f"{where}: degrees: 必须是 2 个正整数")
    if block.get('class', 'unknown') not in CLASS_TAGS:
        violations.append(f"{where}: class: 未知分类 {block.get('class')!r}")
    if block.get('subclass', 'i') not in SUBCLASSES:
        violations.append(f"{where}: subclass: 未知子类 {block.get('subclass')!r}")
    if 'A3' in block and not _rational(block['A3']):
        violations.append(f"{where}: A3: 不是有理数")
    if block.get('expected_verdict', 'incomplete') not in VERDICTS:
        violations.append(f"{where}: expected_verdict: 未知结论 {block.get('expected_verdict')!r}")
    violations.extend(_basket_violations(where, block.get('basket', [])))
    violations.extend(_strata_violations(where, block.get('strata', [])))
    if 'lxy' in block:
        violations.extend(_lxy_violations(where, block['lxy']))
    for n, config in enumerate(block.get('distinguished', [])):
        keys = ('k', 'j1', 'j2', 'i1', 'i2')
        if not isinstance(config, dict) or not all(_is_int(config.get(k)) and 0 <= config[k] <= 5 for k in keys):
            violations.append(f"{where}: distinguished[{n}]: 需要 0..5 的下标 k, j1, j2, i1, i2")
    for n, anomaly in enumerate(block.get('anomalies', [])):
        if not isinstance(anomaly, dict) or not isinstance(anomaly.get('stratum'), str):
            violations.append(f"{where}: anomalies[{n}]: 需要 stratum")
    return violations


def schema_violations(document) -> List[str]:
    if not isinstance(document, dict):
        return ["顶层必须是对象"]
    violations = []
    if not isinstance(document.get('version'), str):
        violations.append("version: 必须是字符串")
    families = document.get('families')
    if not isinstance(families, list):
        return violations + ["families: 必须是列表"]
    seen = set()
    for block in families:
        violations.extend(_family_violations(block))
        no = block.get('no') if isinstance(block, dict) else None
        if no in seen:
            violations.append(f"family {no}: no: 族编号重复")
        seen.add(no)
    return violations


# ---------- 构造记录 ----------

def _build_lxy(no: int, family: WCIFamily, block: Dict) -> LxyRecord:
    width = len(LXY_VARIABLES)
    return LxyRecord(
        family_no=no,
        variables=LXY_VARIABLES,
        weights=tuple(family.weights[2:]),
        degrees=family.degrees,
        g1=parse_terms(block['g1'], width, f"family {no}: lxy.g1"),
        g2=parse_terms(block['g2'], width, f"family {no}: lxy.g2"),
        sing_points=[item['point'] for item in block.get('sing', [])],
        sing_mults={item['point']: item['mult'] for item in block.get('sing', [])},
        irr_witness=block.get('witness', ''),
        conditions=[LxyCondition(c['text'], tuple(c.get('exp', ()))) for c in block.get('conds', [])],
        cover_singular={item['point']: item['mult'] for item in block.get('cover_singular', [])},
    )


def build_record(block: Dict) -> FamilyRecord:
    no = block['no']
    family = WCIFamily.create(no, block['weights'], block['degrees'], block.get('class', 'unknown'))
    basket = [BasketEntry(QuotientSingularity(b['r'], b['a'], b['count'], frozenset(b.get('marks', []))),
                          tuple(b.get('points', [])))
              for b in block.get('basket', [])]
    return FamilyRecord(
        family=family,
        A3=Fraction(str(block.get('A3', '0'))),
        basket=basket,
        strata=[entry_from_record(no, s) for s in block.get('strata', [])],
        lxy=_build_lxy(no, family, block['lxy']) if 'lxy' in block else None,
        distinguished=[DistinguishedConfig(c['k'], c['j1'], c['j2'], c['i1'], c['i2'])
                       for c in block.get('distinguished', [])],
        assumptions=list(block.get('assumptions', [])),
        anomalies={a['stratum']: a.get('note', '') for a in block.get('anomalies', [])},
        expected_verdict=block.get('expected_verdict', 'incomplete'),
        subclass=block.get('subclass', ''),
        notes=block.get('notes', ''),
    )


def crossref_violations(record: FamilyRecord) -> List[str]:
    where = f"family {record.family_no}"
    violations = []
    marked_types = [e.singularity.type_key for e in record.marked_entries('d')]
    for config in record.distinguished:
        try:
            s = config.singularity(record.family)
        except ValueError as e:
            violations.append(f"{where}: distinguished: 配置 {config.indices()} 不给出终端商奇点: {e}")
            continue
        if s.type_key not in marked_types:
            violations.append(f"{where}: distinguished: 配置 {config.indices()} 的类型 {s.label()} "
                              f"没有带 d 标记的奇点篮条目")
    for entry in record.strata:
        if entry.lemma_id not in LEMMA_TAGS:
            violations.append(f"{where}: strata: {entry.stratum_id} 引用未知引理 {entry.lemma_id}")
    names = {f"p_{v}" for v in LXY_VARIABLES}
    for entry in record.basket:
        for point in entry.points:
            if point not in names:
                violations.append(f"{where}: basket: 未知坐标点 {point}")
    if record.lxy is not None:
        for point in list(record.lxy.sing_points) + list(record.lxy.cover_singular):
            if point not in names:
                violations.append(f"{where}: lxy: 未知坐标点 {point}")
        violations.extend(f"{where}: lxy: {p}" for p in lxy_problems(record.lxy))
    return violations


def _first_family(violations: List[str]) -> Optional[int]:
    for v in violations:
        if v.startswith('family '):
            head = v[len('family '):].split(':', 1)[0]
            if head.isdigit():
                return int(head)
    return None


def load_db_text(text: str, source: str = '<memory>') -> FamilyDB:
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"{source} 不是合法的 JSON: {e}", [f"{source}: line {e.lineno}: {e.msg}"])

    violations = schema_violations(document)
    if violations:
        raise SchemaError(f"{source} 存在 {len(violations)} 处结构错误", violations,
                          family_no=_first_family(violations))

    families: Dict[int, FamilyRecord] = {}
    build_errors = []
    for block in document['families']:
        try:
            families[block['no']] = build_record(block)
        except SchemaError as e:
            build_errors.extend(e.violations)
        except ValueError as e:
            build_errors.append(f"family {block['no']}: {e}")
    if build_errors:
        raise SchemaError(f"{source} 存在 {len(build_errors)} 处结构错误", build_errors,
                          family_no=_first_family(build_errors))

    lxy_errors, ref_errors = [], []
    for record in families.values():
        for v in crossref_violations(record):
            (lxy_errors if ': lxy: ' in v and '坐标点' not in v else ref_errors).append(v)
    if lxy_errors:
        raise SchemaError(f"{source} 中 L_xy 方程不合法", lxy_errors, family_no=_first_family(lxy_errors))
    if ref_errors:
        raise CrossRefError(f"{source} 存在 {len(ref_errors)} 处交叉引用错误", ref_errors,
                            family_no=_first_family(ref_errors))

    logger.info(f"已加载 {len(families)} 个族 ({source})")
    return FamilyDB(version=document['version'], families=families, document=document, source=source)


def load_db(path: str) -> FamilyDB:
    if not os.path.exists(path):
        raise ParseError(f"数据库文件不存在: {path}", [f"{path}: not found"])
    with open(path, 'r', encoding='utf-8') as f:
        return load_db_text(f.read(), path)


def serialize(db: FamilyDB) -> str:
    return json.dumps(db.document, ensure_ascii=False, indent=2) + '\n'
