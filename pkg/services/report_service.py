# -*- coding: utf-8 -*-
"""
报告服务模块 - 表格复算、证书批处理、分类数值、超刚性与数据库校验

每个命令返回 (文本, 退出码)：0 一致/通过，1 存在差异/未通过，2 数据不完整。
"""

import json
import logging
import os
from typing import Dict, List, Optional, Tuple

from config import Config
from services.certify import (F_I, F_II, OTHER, FamilyCertificate, certify_family,
                              classification_numbers, classify_family, parse_septuple,
                              superrigid_check)
from services.exact_arith import rational_str
from services.floplocus import consistency_T1, flop_numbers
from services.lxy import (coordinate_points_on_curve, elimination_is_exact, lxy_jacobian_sing_check,
                          lxy_mult_at, polynomial_str)
from services.wps_model import (anticanonical_degree, compute_basket, detect_distinguished,
                                index_check, kawamata_table, stratum_checksums)
from utils.exceptions import FamilyDBError, IncompleteData, WCIFanoError
from utils.family_db import FamilyDB, FamilyRecord, load_db

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_DIFF, EXIT_INCOMPLETE = 0, 1, 2

# 表1/表3 对应 F(i)，表2/表4 对应 F(ii)
TABLE_CLASSES = {1: F_I, 2: F_II, 3: F_I, 4: F_II}

STATUS_ICONS = {'pass': '✅', 'fail': '❌', 'not_applicable': '➖'}


def _class_of(record: FamilyRecord) -> str:
    tag = record.family.class_tag
    return tag if tag in (F_I, F_II) else OTHER


def _diff(no: int, column: str, computed, recorded) -> str:
    return f"family {no}: ({column}) computed {computed}, recorded {recorded}"


def invariant_diffs(record: FamilyRecord) -> List[str]:
    """表1/表2 的可推导列：(A^3)、指标、奇点篮、Bézout 校验、分类与特殊奇点"""
    family = record.family
    no = family.family_no
    diffs = []
    A3 = anticanonical_degree(family)
    if A3 != record.A3:
        diffs.append(_diff(no, 'A^3', rational_str(A3), rational_str(record.A3)))
    if not index_check(family):
        diffs.append(_diff(no, 'index', sum(family.weights) - sum(family.degrees), 1))

    try:
        basket = compute_basket(family)
    except WCIFanoError as e:
        diffs.append(f"family {no}: (basket) 无法计算: {e.message}")
    else:
        if basket != record.recorded_basket:
            diffs.append(_diff(no, 'basket', basket.label(), record.recorded_basket.label()))
        for checksum in stratum_checksums(family):
            if not checksum.ok:
                diffs.append(_diff(no, f"Bézout P{checksum.weights}",
                                   rational_str(checksum.point_sum), rational_str(checksum.bezout)))

    configs = detect_distinguished(family)
    computed_types = sorted(c.singularity(family).type_key for c in configs)
    recorded_types = sorted(e.singularity.type_key for e in record.marked_entries('d')
                            for _ in range(e.singularity.count))
    if computed_types != recorded_types:
        diffs.append(_diff(no, 'distinguished', computed_types, recorded_types))
    computed_configs = sorted(c.indices() for c in configs)
    recorded_configs = sorted(c.indices() for c in record.distinguished)
    if computed_configs != recorded_configs:
        diffs.append(_diff(no, 'configs', computed_configs, recorded_configs))

    classification = classify_family(family, configs)
    if classification != _class_of(record):
        diffs.append(_diff(no, 'class', classification, family.class_tag))

    if classification == F_II:
        for config in configs:
            numbers = flop_numbers(config, family)
            if not consistency_T1(config, family, numbers):
                diffs.append(f"family {no}: (flop {config.point_name(family)}) "
                             f"e = {numbers.e} 与 T1 上的相交数不一致")
    return diffs


def lxy_diffs(record: FamilyRecord) -> List[str]:
    """表3/表4：Sing 列的 Jacobian 校验、重数与参数实例化无关性"""
    no = record.family_no
    lxy = record.lxy
    if lxy is None:
        return [f"family {no}: (lxy) 缺少 L_xy 记录"]
    diffs = []
    try:
        for point in lxy.sing_points:
            if not lxy_jacobian_sing_check(lxy, point):
                diffs.append(_diff(no, f"Sing {point}", 'nonsingular', 'singular'))
                continue
            recorded = lxy.sing_mults.get(point)
            mult = lxy_mult_at(lxy, point).mult
            if recorded is not None and mult != recorded:
                diffs.append(_diff(no, f"mult {point}", mult, recorded))
            if not elimination_is_exact(lxy, point):
                diffs.append(_diff(no, f"elim {point}", 'inexact', 'exact'))
            alt = lxy_mult_at(lxy, point, Config.ALT_PARAM_PRIMES).mult
            if alt != mult:
                diffs.append(_diff(no, f"mult {point} 换参数", alt, mult))

        # 商曲线光滑但覆盖上奇异的点记在 cover_singular 中，不在 Sing 列
        for point in coordinate_points_on_curve(lxy):
            if point in lxy.sing_points or point in lxy.cover_singular:
                continue
            if lxy_jacobian_sing_check(lxy, point):
                diffs.append(_diff(no, f"Sing {point}", 'singular', 'nonsingular'))

        for point, recorded in lxy.cover_singular.items():
            mult = lxy_mult_at(lxy, point).mult
            if mult != recorded:
                diffs.append(_diff(no, f"cover mult {point}", mult, recorded))
    except WCIFanoError as e:
        diffs.append(f"family {no}: (lxy) {e.message}")
    return diffs


class ReportService:
    """命令行各子命令的实现"""

    def __init__(self, db_path: Optional[str] = None, db: Optional[FamilyDB] = None):
        self.db_path = Config.resolve_db_path(db_path)
        self._db = db

    @property
    def db(self) -> FamilyDB:
        if self._db is None:
            self._db = load_db(self.db_path)
        return self._db

    def _select(self, family_no: Optional[int], which: Optional[str] = None) -> List[FamilyRecord]:
        if family_no is not None:
            return [self.db.get(family_no)]
        records = self.db.records()
        if which is not None:
            records = [r for r in records if _class_of(r) == which]
        return records

    # ---------- tables ----------

    def cmd_tables(self, which: int) -> Tuple[str, int]:
        if which not in TABLE_CLASSES:
            return f"❌ 表格编号必须是 1-4: {which}", EXIT_DIFF
        records = self._select(None, TABLE_CLASSES[which])
        lines = [f"📊 表{which}: {len(records)} 个族"]
        all_diffs = []
        for record in records:
            if which in (1, 2):
                diffs = invariant_diffs(record)
                basket = record.recorded_basket.label()
                lines.append(f"  {'✅' if not diffs else '❌'} {record.family.label()}  "
                             f"A^3 = {rational_str(record.A3)}  [{basket}]")
            else:
                diffs = lxy_diffs(record)
                lxy = record.lxy
                sing = ', '.join(f"{p}({lxy.sing_mults.get(p, '?')})" for p in lxy.sing_points) \
                    if lxy else '—'
                equations = f"{polynomial_str(lxy, lxy.g1)} = {polynomial_str(lxy, lxy.g2)} = 0" \
                    if lxy else '—'
                lines.append(f"  {'✅' if not diffs else '❌'} No.{record.family_no}  "
                             f"{equations}  Sing: {sing or '∅'}")
            if record.notes:
                lines.append(f"      📝 {record.notes}")
            all_diffs.extend(diffs)

        if all_diffs:
            lines.append(f"❌ 发现 {len(all_diffs)} 处差异:")
            lines.extend(f"  {d}" for d in all_diffs)
            return '\n'.join(lines), EXIT_DIFF
        lines.append("🎉 全部列与记录一致")
        return '\n'.join(lines), EXIT_OK

    # ---------- certify ----------

    def _certificate_lines(self, cert: FamilyCertificate) -> List[str]:
        lines = [f"📜 {cert.label}  {cert.classification}  A^3 = {rational_str(cert.A3)}"]
        for result in cert.point_class_results:
            if result.status == 'open':
                icon = '⏸️'
            elif result.status == 'anomalous':
                icon = '⚠️'
            else:
                icon = STATUS_ICONS[result.check.verdict]
            lines.append(f"    {icon} {result.stratum:<28} {result.check.lemma_id:<16} "
                         f"{result.check.verdict:<15} {result.check.detail}")
        if cert.open_points:
            lines.append(f"    ⏸️  未决特殊奇点: {', '.join(cert.open_points)}")
        for assumption in cert.assumptions:
            lines.append(f"    📌 假设: {assumption}")
        for anomaly in cert.anomalies:
            lines.append(f"    ⚠️  异常: {anomaly}")
        lines.append(f"    ➡️  结论: {cert.verdict}")
        return lines

    def _write_json(self, json_path: str, certificates: List[Dict]) -> str:
        if json_path == '':
            os.makedirs(Config.REPORT_DIR, exist_ok=True)
            json_path = os.path.join(Config.REPORT_DIR, 'certificates.json')
        parent = os.path.dirname(json_path)
        if parent:
            os.makedirs(parent, exist_ok=True)
        document = {"version": self.db.version, "certificates": certificates}
        with open(json_path, 'w', encoding='utf-8') as f:
            json.dump(document, f, ensure_ascii=False, indent=2)
            f.write('\n')
        logger.info(f"证书已写入 {json_path}")
        return json_path

    def cmd_certify(self, family_no: Optional[int] = None, all_families: bool = False,
                    json_path: Optional[str] = None) -> Tuple[str, int]:
        if family_no is None and not all_families:
            return "❌ 需要 --family N 或 --all", EXIT_DIFF
        lines = []
        certificates = []
        mismatches, incomplete = [], []
        for record in self._select(family_no):
            try:
                cert = certify_family(record)
            except IncompleteData as e:
                logger.error(f"证书数据不完整: {e}")
                incomplete.append(str(e))
                lines.append(f"🚧 No.{record.family_no}: {e.message}")
                continue
            certificates.append(cert.to_dict())
            lines.extend(self._certificate_lines(cert))
            if cert.verdict != record.expected_verdict:
                mismatches.append(f"family {record.family_no}: (verdict) computed {cert.verdict}, "
                                  f"recorded {record.expected_verdict}")

        counts: Dict[str, int] = {}
        for c in certificates:
            counts[c["verdict"]] = counts.get(c["verdict"], 0) + 1
        lines.append("📋 汇总: " + ', '.join(f"{v} × {n}" for v, n in sorted(counts.items())))
        if json_path is not None:
            lines.append(f"💾 JSON: {self._write_json(json_path, certificates)}")

        if incomplete:
            lines.append(f"🚧 {len(incomplete)} 个族数据不完整")
            return '\n'.join(lines), EXIT_INCOMPLETE
        if mismatches:
            lines.append("❌ 结论与记录不符:")
            lines.extend(f"  {m}" for m in mismatches)
            return '\n'.join(lines), EXIT_DIFF
        return '\n'.join(lines), EXIT_OK

    # ---------- classify ----------

    def cmd_classify(self, family_no: Optional[int] = None) -> Tuple[str, int]:
        lines = []
        mismatches = []
        for record in self._select(family_no):
            family = record.family
            try:
                configs = detect_distinguished(family)
                numbers = classification_numbers(family, configs)
                classification = classify_family(family, configs)
                rows = kawamata_table(family, record.recorded_basket)
            except WCIFanoError as e:
                logger.warning(f"分类数值无法计算: {e}")
                lines.append(f"❌ {family.label()}: {e.message}")
                mismatches.append(f"family {family.family_no}: (class) 无法计算: {e.message}")
                continue
            icon = '✅' if classification == _class_of(record) else '❌'
            lines.append(f"{icon} {family.label()}  → {classification}")
            lines.append(f"    a1·a5·A^3 = {rational_str(numbers['a1a5A3'])}   "
                         f"a1·a3·A^3 = {rational_str(numbers['a1a3A3'])}")
            for p in numbers["points"]:
                relation = '≥' if p["wp"] >= p["d1"] else '<'
                lines.append(f"    🔹 {p['point']} {p['type']}: wp = {p['wp']} {relation} d1 = {p['d1']}")
            # 只有未标记的点要求 B^3 ≤ 0
            for row in rows:
                marks = '_' + ''.join(row["marks"]) if row["marks"] else ''
                flag = ' ⚠️' if row["B3"] > 0 and not row["marks"] else ''
                lines.append(f"    🔸 {row['count']} × {row['type']}{marks}: wp = {row['wp']}, "
                             f"B^3 = {rational_str(row['B3'])}{flag}")
            if icon == '❌':
                mismatches.append(_diff(family.family_no, 'class', classification, family.class_tag))
        if mismatches:
            lines.extend(mismatches)
            return '\n'.join(lines), EXIT_DIFF
        return '\n'.join(lines), EXIT_OK

    # ---------- superrigid ----------

    def cmd_superrigid(self, septuple: str) -> Tuple[str, int]:
        try:
            report = superrigid_check(parse_septuple(septuple), self.db)
        except ValueError as e:
            return f"❌ {e}", EXIT_DIFF
        except WCIFanoError as e:
            logger.warning(f"超刚性检查失败: {e}")
            return f"❌ {e.message}", EXIT_DIFF
        data = report.to_dict()
        lines = [f"🧭 ({data['septuple']}) → No.{report.family_no}, d' = {report.d_prime}"]
        for name, ok in report.checks.items():
            lines.append(f"    {'✅' if ok else '❌'} {name}")
        if report.certified:
            lines.append("🎉 certified")
            return '\n'.join(lines), EXIT_OK
        lines.append("❌ uncertified")
        lines.extend(f"    - {reason}" for reason in report.reasons)
        return '\n'.join(lines), EXIT_DIFF

    # ---------- validate-db ----------

    def cmd_validate_db(self) -> Tuple[str, int]:
        try:
            db = load_db(self.db_path)
        except FamilyDBError as e:
            lines = [f"❌ {e.message}"]
            lines.extend(f"  {v}" for v in e.violations)
            return '\n'.join(lines), EXIT_DIFF
        self._db = db
        classes: Dict[str, int] = {}
        for record in db.records():
            classes[record.family.class_tag] = classes.get(record.family.class_tag, 0) + 1
        summary = ', '.join(f"{tag} × {n}" for tag, n in sorted(classes.items()))
        return (f"✅ {self.db_path}: version {db.version}, {len(db.families)} 个族 ({summary})，"
                f"0 处错误"), EXIT_OK
