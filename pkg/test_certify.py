#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
LCT 判据与证书测试脚本
"""

import sys
import os
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from dataclasses import replace
from fractions import Fraction

import pytest

from config import Config
from services.certify import (F_I, F_II, INCOMPLETE, LCT_EQUALS_1, LCT_ON_XCIRC, OTHER,
                              check_singptNE_numeric, check_somedistsingpt, classify_family,
                              certify_family, parse_septuple, superrigid_check)
from services.criterion import (FAIL, PASS, check_criwisol, check_exclG, check_exclL,
                                criwisol_outcome, recheck)
from services.wps_model import QuotientSingularity, WCIFamily, detect_distinguished
from utils.exceptions import IncompleteData, NoMatchingFamily, NonPositiveDPrime
from utils.family_db import load_db

DB_PATH = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'data', 'families.json')

F_I_FAMILIES = {42, 55, 66, 68, 69, 77, 81, 82}
LCT1_FAMILIES = {42, 55, 66, 68, 69, 77, 79, 80, 81, 82, 83}

SEPTUPLES = {
    "14;1,2,5,6,7,9": (66, 15),
    "15;1,2,5,6,7,9": (66, 14),
    "15;1,3,5,6,7,8": (68, 14),
    "16;1,1,5,7,8,9": (69, 14),
    "18;1,1,6,8,9,10": (77, 16),
    "22;1,2,5,9,11,13": (82, 18),
    "21;1,3,4,7,10,17": (83, 20),
}


def test_exclL():
    print("⚖️ 测试 exclL...")
    assert check_exclL(6, 1, 2, Fraction(1, 18), 2).verdict == PASS
    assert check_exclL(1, 1, 1, Fraction(1, 6), 1).verdict == PASS
    assert check_exclL(8, 1, 2, Fraction(1, 8), 2).verdict == FAIL
    assert check_exclL(2, 1, 2, Fraction(1, 8), 3).verdict == FAIL
    assert check_exclL(2, 1, 2, Fraction(1, 8), 1, lc_S1_assumed=False).verdict == FAIL
    print("✅ exclL 正确")


def test_exclG():
    print("⚖️ 测试 exclG...")
    check = check_exclG(1, None, 9, Fraction(4, 45))
    assert check.verdict == PASS and check.inputs["value"] == Fraction(36, 45)
    check = check_exclG(1, None, 18, Fraction(1, 18))
    assert check.verdict == PASS and check.inputs["value"] == 1
    assert check_exclG(1, 1, 7, Fraction(1, 6), variant='two_divisors').verdict == FAIL
    with pytest.raises(ValueError):
        check_exclG(1, None, 7, Fraction(1, 6), variant='two_divisors')
    with pytest.raises(ValueError):
        check_exclG(1, None, 7, Fraction(1, 6), variant='other')
    print("✅ exclG 正确")


def test_criwisol():
    print("⚖️ 测试 criwisol...")
    assert criwisol_outcome(check_criwisol(1, 5, Fraction(5, 56), 1, Fraction(3, 56))) == 'pass(a)'
    assert criwisol_outcome(check_criwisol(2, 5, Fraction(15, 56), 1, Fraction(5, 56))) == 'pass(b)'
    assert criwisol_outcome(check_criwisol(1, 10, Fraction(1, 2), 1, Fraction(1, 5))) == 'fail'
    print("✅ criwisol 分支正确")


def test_criwisol_branches_exhaustive():
    """每组正输入恰好落入 pass(a)、pass(b)、fail 之一"""
    for c in (Fraction(1), Fraction(2), Fraction(1, 3)):
        for l in range(1, 13):
            for d in (Fraction(1, 7), Fraction(2, 9), Fraction(5, 56), Fraction(1, 2), Fraction(3)):
                for m in (1, 2, 4):
                    for A3 in (Fraction(1, 42), Fraction(5, 56), Fraction(1, 6)):
                        check = check_criwisol(c, l, d, m, A3)
                        outcome = criwisol_outcome(check)
                        assert outcome in ('pass(a)', 'pass(b)', 'fail')
                        if l * d <= m:
                            assert outcome != 'pass(b)'
                        else:
                            assert outcome != 'pass(a)'
                        assert recheck(check) == check.verdict


def test_singptNE_numeric():
    db = load_db(DB_PATH)
    assert check_singptNE_numeric(db.get(82).family, QuotientSingularity(5, 1)).verdict == PASS
    assert check_singptNE_numeric(db.get(77).family, QuotientSingularity(3, 1)).verdict == PASS
    check = check_singptNE_numeric(db.get(69).family, QuotientSingularity(5, 2))
    assert check.verdict == FAIL
    assert check.inputs["B3"] == Fraction(1, 18)
    assert check.assumed
    print("✅ 未标记奇点的 Kawamata 次数检查正确")


def test_somedistsingpt():
    print("🎯 测试边界特殊奇点...")
    db = load_db(DB_PATH)
    for no in (79, 80, 83):
        family = db.get(no).family
        [config] = detect_distinguished(family)
        check = check_somedistsingpt(config, family)
        assert check.inputs["value"] == 2, no
        assert check.verdict == PASS
    family = db.get(54).family
    [config] = detect_distinguished(family)
    assert check_somedistsingpt(config, family).verdict == FAIL
    print("✅ No.79/80/83 恰好取等号 2")


def test_classification():
    print("🏷️ 测试分类...")
    db = load_db(DB_PATH)
    for record in db.records():
        expected = F_I if record.family_no in F_I_FAMILIES else F_II
        assert classify_family(record.family) == expected, record.family_no
    assert classify_family(WCIFamily.create(0, [1, 1, 1, 1, 1, 1], [2, 3])) == OTHER
    print("✅ 8 个 F(i) 与 21 个 F(ii)")


def test_certificates_for_all_families():
    print("📜 测试全部证书...")
    db = load_db(DB_PATH)
    for record in db.records():
        cert = certify_family(record)
        expected = LCT_EQUALS_1 if record.family_no in LCT1_FAMILIES else LCT_ON_XCIRC
        assert cert.verdict == expected, record.family_no
        assert cert.verdict == record.expected_verdict
        assert not cert.failing()
        for result in cert.point_class_results:
            assert recheck(result.check) == result.check.verdict, (record.family_no, result.stratum)
        if cert.verdict == LCT_EQUALS_1:
            assert not cert.open_points and cert.corollaries
        else:
            assert cert.open_points
        assert any("L_xy irreducible" in a for a in cert.assumptions)
    print("✅ 11 个 lct = 1，18 个 lct_{X°} = 1")


def test_certificate_examples():
    db = load_db(DB_PATH)
    cert = certify_family(db.get(54))
    assert cert.open_points == ["p_u 1/11(4,7)"]

    cert = certify_family(db.get(83))
    step = next(r for r in cert.point_class_results if r.stratum == "distinguished/p_u")
    assert step.check.lemma_id == 'somedistsingpt' and step.status == 'checked'

    cert = certify_family(db.get(69))
    anomalous = [r for r in cert.point_class_results if r.status == 'anomalous']
    assert [r.stratum for r in anomalous] == ["singular/1/5(2,3)"]
    assert anomalous[0].check.anomalous
    assert cert.verdict == LCT_EQUALS_1

    cert = certify_family(db.get(57))
    assert any(r.stratum == "flop/p_s" and r.status == 'anomalous' for r in cert.point_class_results)

    data = certify_family(db.get(66)).to_dict()
    assert data["A3"] == "1/18"
    assert data["verdict"] == LCT_EQUALS_1


def test_stratum_scope_is_assumed():
    db = load_db(DB_PATH)
    cert = certify_family(db.get(54))
    scope = "p ∉ Exc(π), p ∉ L_xy"
    for stratum in ("nonsingular/off_Lxy/point", "nonsingular/off_Lxy/curve"):
        result = next(r for r in cert.point_class_results if r.stratum == stratum)
        assert scope in result.check.assumed, stratum
        assert recheck(result.check) == PASS
    assert scope in cert.assumptions
    assert scope in cert.to_dict()["assumptions"]


def test_unrecorded_failure_is_incomplete():
    db = load_db(DB_PATH)
    record = replace(db.get(69), anomalies={})
    cert = certify_family(record)
    assert cert.verdict == INCOMPLETE
    assert [r.stratum for r in cert.failing()] == ["singular/1/5(2,3)"]


def test_incomplete_data():
    db = load_db(DB_PATH)
    with pytest.raises(IncompleteData):
        certify_family(replace(db.get(77), strata=[]))
    with pytest.raises(IncompleteData):
        certify_family(replace(db.get(77), lxy=None))
    with pytest.raises(IncompleteData):
        certify_family(replace(db.get(77), family=WCIFamily.create(77, [1, 1, 1, 1, 1, 1], [2, 3])))


def test_superrigid():
    print("🧭 测试超刚性...")
    assert set(Config.THEOREM_LCT1_FAMILIES) == LCT1_FAMILIES
    db = load_db(DB_PATH)
    for text, (no, d_prime) in SEPTUPLES.items():
        report = superrigid_check(parse_septuple(text), db)
        assert report.family_no == no, text
        assert report.d_prime == d_prime, text
        assert report.certified, (text, report.reasons)
        assert report.to_dict()["status"] == "certified"

    report = superrigid_check(parse_septuple("10;1,1,3,4,5,9"), db)
    assert report.family_no == 40
    assert not report.certified and report.reasons

    with pytest.raises(NonPositiveDPrime):
        superrigid_check(parse_septuple("10;1,1,1,1,1,1"), db)
    with pytest.raises(NoMatchingFamily):
        superrigid_check(parse_septuple("13;1,2,5,6,7,10"), db)
    for bad in ("14;1,2,5,6,7", "x;1,2,5,6,7,9", "14,1,2,5,6,7,9", "14;1,2,5,6,7,0"):
        with pytest.raises(ValueError):
            parse_septuple(bad)
    print("✅ 7 个七元组全部通过，畸形输入被拒绝")


def main():
    """运行全部测试"""
    print("🚀 开始 LCT 证书测试")
    print("=" * 50)
    test_exclL()
    test_exclG()
    test_criwisol()
    test_criwisol_branches_exhaustive()
    test_singptNE_numeric()
    test_somedistsingpt()
    test_classification()
    test_certificates_for_all_families()
    test_certificate_examples()
    test_stratum_scope_is_assumed()
    test_unrecorded_failure_is_incomplete()
    test_incomplete_data()
    test_superrigid()
    print("=" * 50)
    print("🎉 LCT 证书测试全部通过")


if __name__ == '__main__':
    main()
