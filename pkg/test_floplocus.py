#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
翻转曲线数值测试脚本
"""

import sys
import os
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

import random
from dataclasses import replace
from fractions import Fraction

from config import Config
from services.certify import F_II, classify_family
from services.criterion import NOT_APPLICABLE, PASS
from services.floplocus import (config_wp, consistency_T1, flop_identity_residual, flop_numbers,
                                flop_prop_applicable, upsilon_boundary_check,
                                upsilon_boundary_from_sets)
from services.wps_model import detect_distinguished
from utils.family_db import load_db

DB_PATH = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'data', 'families.json')

# (族, 点) -> 翻转曲线条数 e
EXPECTED_E = {
    (40, 'p_u'): 6, (43, 'p_u'): 8, (50, 'p_t'): 14, (50, 'p_u'): 14, (52, 'p_t'): 15,
    (52, 'p_u'): 10, (53, 'p_u'): 13, (54, 'p_u'): 6, (56, 'p_u'): 8, (57, 'p_s'): 28,
    (57, 'p_u'): 12, (58, 'p_t'): 14, (58, 'p_u'): 14, (61, 'p_u'): 6, (62, 'p_u'): 9,
    (63, 'p_t'): 15, (63, 'p_u'): 12, (65, 'p_u'): 6, (67, 'p_u'): 10, (70, 'p_u'): 8,
    (72, 'p_u'): 6, (73, 'p_u'): 10, (74, 'p_u'): 14, (79, 'p_u'): 8, (80, 'p_u'): 10,
    (83, 'p_u'): 6,
}


def _f_ii_configs():
    db = load_db(DB_PATH)
    for record in db.records():
        family = record.family
        if classify_family(family) != F_II:
            continue
        for config in detect_distinguished(family):
            yield family, config


def test_flop_numbers():
    print("🔁 测试翻转曲线条数...")
    seen = {}
    for family, config in _f_ii_configs():
        numbers = flop_numbers(config, family)
        seen[(family.family_no, config.point_name(family))] = numbers.e
        assert numbers.A_dot_gamma == Fraction(1, family.a(config.k))
        assert numbers.gamma_self == numbers.gamma_pair - 1
    assert seen == EXPECTED_E
    print(f"✅ {len(seen)} 个特殊奇点的 e 全部为整数且与预期一致")


def test_flop_identities():
    for family, config in _f_ii_configs():
        assert flop_identity_residual(config, family) == 0
        assert consistency_T1(config, family)
    print("✅ 闭式恒等式与 T1 上的相交数一致")


def test_consistency_rejects_wrong_count():
    for family, config in _f_ii_configs():
        numbers = flop_numbers(config, family)
        assert not consistency_T1(config, family, replace(numbers, e=numbers.e + 1))
        assert not consistency_T1(config, family, replace(numbers, e=numbers.e - 1))


def test_flop_prop_applicability():
    print("🧭 测试翻转曲线判据的适用性...")
    for family, config in _f_ii_configs():
        check = flop_prop_applicable(config, family)
        point = (family.family_no, config.point_name(family))
        if point == (57, 'p_s'):
            assert check.verdict == NOT_APPLICABLE
            assert config_wp(config, family) == 6 < family.d1
        else:
            assert check.verdict == PASS, point
        assert check.assumed
    print("✅ 只有 No.57 的 p_s 不适用")


def test_upsilon_boundary():
    assert not upsilon_boundary_from_sets(set(), {(1, 0)})
    assert not upsilon_boundary_from_sets({(2, 1)}, {(1, 3)})
    assert upsilon_boundary_from_sets({(3, 0)}, {(0, 2)})
    db = load_db(DB_PATH)
    for no in (79, 80, 83):
        family = db.get(no).family
        [config] = detect_distinguished(family)
        assert upsilon_boundary_check(config, family), no


def test_upsilon_boundary_monotone():
    """往两组单项式里再加单项式，已经成立的边界条件不会失效"""
    rng = random.Random(Config.FALSIFIER_SEED)
    pool = [(i, j) for i in range(5) for j in range(5) if i + j > 0]
    holding = 0
    for _ in range(400):
        first = set(rng.sample(pool, rng.randint(0, 4)))
        second = set(rng.sample(pool, rng.randint(0, 4)))
        if not upsilon_boundary_from_sets(first, second):
            continue
        holding += 1
        wider_first = first | set(rng.sample(pool, rng.randint(0, 3)))
        wider_second = second | set(rng.sample(pool, rng.randint(0, 3)))
        assert upsilon_boundary_from_sets(wider_first, wider_second), (first, second)
        assert upsilon_boundary_from_sets(wider_first, second)
    assert holding > 0


def main():
    """运行全部测试"""
    print("🚀 开始翻转曲线测试")
    print("=" * 50)
    test_flop_numbers()
    test_flop_identities()
    test_consistency_rejects_wrong_count()
    test_flop_prop_applicability()
    test_upsilon_boundary()
    test_upsilon_boundary_monotone()
    print("=" * 50)
    print("🎉 翻转曲线测试全部通过")


if __name__ == '__main__':
    main()
