#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
加权射影空间与奇点篮测试脚本
"""

import sys
import os
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from collections import Counter
from fractions import Fraction

import pytest

from services.wps_model import (Basket, QuotientSingularity, WCIFamily, WeightedSpace,
                                anticanonical_degree, compute_basket, detect_distinguished,
                                index_check, kawamata_degree, kawamata_table,
                                quasismooth_ci_necessary, quasismooth_hypersurface,
                                stratum_checksums, weight_product, wellformed)
from utils.family_db import load_db

DB_PATH = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'data', 'families.json')


def _db():
    return load_db(DB_PATH)


def test_weighted_space():
    print("📐 测试加权射影空间...")
    space = WeightedSpace.from_weights([3, 1, 2])
    assert space.weights == (1, 2, 3)
    assert space.perm == (1, 2, 0)
    assert space.dim == 2
    with pytest.raises(ValueError):
        WeightedSpace.from_weights([1, 0, 2])
    family = WCIFamily.create(42, [6, 1, 4, 5, 6, 1], [12, 10])
    assert family.weights == (1, 1, 4, 5, 6, 6)
    assert (family.d1, family.d2) == (10, 12)
    assert family.label() == "No.42 X_{10,12} ⊂ P(1,1,4,5,6,6)"
    print("✅ 权重升序与原始下标保存正确")


def test_anticanonical_degrees():
    print("🔢 测试反典范次数...")
    examples = {42: Fraction(1, 6), 81: Fraction(4, 231), 83: Fraction(1, 34), 50: Fraction(2, 21)}
    db = _db()
    for no, value in examples.items():
        assert anticanonical_degree(db.get(no).family) == value
    for record in db.records():
        assert anticanonical_degree(record.family) == record.A3, record.family_no
        assert index_check(record.family), record.family_no
    print(f"✅ {len(db.families)} 个族的 A^3 与指标全部正确")


def test_singularity_labels():
    assert QuotientSingularity(2, 1).label() == "1/2"
    assert QuotientSingularity(4, 3).label() == "1/4"
    assert QuotientSingularity(8, 5).a == 3
    assert QuotientSingularity(8, 5).label() == "1/8(3,5)"
    assert QuotientSingularity(7, 2, 2, frozenset({'d'})).full_label() == "2 × 1/7(2,5)_d"
    with pytest.raises(ValueError):
        QuotientSingularity(4, 2)
    with pytest.raises(ValueError):
        QuotientSingularity(5, 1, marks=frozenset({'X'}))
    print("✅ 奇点写法正确")


def test_basket_equality_ignores_marks():
    plain = Basket((QuotientSingularity(2, 1), QuotientSingularity(6, 1, 2)))
    marked = Basket((QuotientSingularity(6, 5, 1, frozenset({'d'})),
                     QuotientSingularity(6, 1, 1, frozenset({'d'})),
                     QuotientSingularity(2, 1)))
    assert plain == marked
    assert plain != Basket((QuotientSingularity(6, 1, 2),))


def test_baskets_match_tables():
    print("🧺 测试奇点篮...")
    db = _db()
    for record in db.records():
        basket = compute_basket(record.family)
        assert basket == record.recorded_basket, \
            f"No.{record.family_no}: {basket.label()} != {record.recorded_basket.label()}"
    print("✅ 29 个族的奇点篮全部一致")


def test_bezout_checksums():
    db = _db()
    for record in db.records():
        for checksum in stratum_checksums(record.family):
            assert checksum.ok, (record.family_no, checksum)
    checksum = next(c for c in stratum_checksums(db.get(42).family) if c.r == 2)
    assert checksum.weights == (4, 6, 6)
    assert checksum.bezout == Fraction(5, 6)
    assert checksum.counts == {2: 1, 6: 2}
    print("✅ 0维奇异层的 Bézout 校验全部成立")


def test_distinguished_points():
    print("🎯 测试特殊奇点...")
    db = _db()
    for record in db.records():
        family = record.family
        configs = detect_distinguished(family)
        assert sorted(c.indices() for c in configs) == sorted(c.indices() for c in record.distinguished)
        recorded = sorted(e.singularity.type_key for e in record.marked_entries('d')
                          for _ in range(e.singularity.count))
        assert sorted(c.singularity(family).type_key for c in configs) == recorded
    family = db.get(43).family
    [config] = detect_distinguished(family)
    s = config.singularity(family)
    assert s.label() == "1/8(3,5)"
    assert weight_product(s) == 15
    assert config.point_name(family) == "p_u"
    print("✅ 特殊奇点与 d 标记一致")


def test_equal_top_weights_give_two_points():
    db = _db()
    for no in (42, 50, 58):
        names = sorted(c.point_name(db.get(no).family) for c in detect_distinguished(db.get(no).family))
        assert names == ["p_t", "p_u"], no


def test_kawamata_degree():
    db = _db()
    assert kawamata_degree(Fraction(2, 65), QuotientSingularity(5, 1)) == Fraction(-1, 52)
    assert kawamata_degree(Fraction(1, 15), QuotientSingularity(3, 1)) < 0
    assert kawamata_degree(Fraction(4, 45), QuotientSingularity(5, 2)) == Fraction(1, 18)
    record = db.get(69)
    rows = kawamata_table(record.family, record.recorded_basket)
    flagged = [row["type"] for row in rows if row["B3"] > 0 and not row["marks"]]
    assert flagged == ["1/5(2,3)"]
    distinguished = next(row for row in rows if row["marks"] == ['d'])
    assert distinguished["B3"] > 0
    print("✅ Kawamata 胀开次数正确（含 No.69 的 +1/18）")


def test_local_types_with_several_units():
    """层上的剩余权重可能要换一个单位才能写成 1/r(1,a,r-a)"""
    db = _db()
    expected = {50: {(3, 1), (7, 2)}, 52: {(2, 1), (7, 2), (8, 3)},
                63: {(4, 1), (7, 3), (8, 3)}, 70: {(3, 1), (5, 2), (11, 4)}}
    for no, types in expected.items():
        basket = compute_basket(db.get(no).family)
        assert set(basket.type_counter()) == types, no


def test_family_79_basket_differs_from_printed_table():
    # 印刷表记为 2 × 1/2, 2 × 1/3, 1/14(5,9)；X ∩ P(6,9) 只有一个 μ_3 点
    db = _db()
    printed = Basket((QuotientSingularity(2, 1, 2), QuotientSingularity(3, 1, 2),
                      QuotientSingularity(14, 5)))
    basket = compute_basket(db.get(79).family)
    assert basket != printed
    assert printed.type_counter() - basket.type_counter() == Counter({(3, 1): 1})
    assert basket.type_counter()[(3, 1)] == 1
    assert db.get(79).recorded_basket == basket


def test_wellformed_and_quasismooth():
    print("🧪 测试良构与拟光滑...")
    db = _db()
    for record in db.records():
        family = record.family
        assert wellformed(family.space, family.degrees), record.family_no
        assert quasismooth_ci_necessary(family), record.family_no
    assert not wellformed(WeightedSpace.from_weights([1, 2, 2, 2, 2, 2]))
    assert quasismooth_hypersurface(14, WeightedSpace.from_weights([1, 2, 5, 6, 7, 9]))
    assert quasismooth_hypersurface(21, WeightedSpace.from_weights([1, 3, 4, 7, 10, 17]))
    # 坐标点 p_4 处没有 x4^m·x_e 型的次数 5 单项式
    assert not quasismooth_hypersurface(5, WeightedSpace.from_weights([1, 1, 1, 1, 7]))
    # No.42 的权重配上次数 (10,13)：P(6,6) 层上次数 10 只有一个外部变量 z
    assert not quasismooth_ci_necessary(WCIFamily.create(42, [1, 1, 4, 5, 6, 6], [10, 13]))
    print("✅ 良构与拟光滑检查正确")


def main():
    """运行全部测试"""
    print("🚀 开始加权射影空间测试")
    print("=" * 50)
    test_weighted_space()
    test_anticanonical_degrees()
    test_singularity_labels()
    test_basket_equality_ignores_marks()
    test_baskets_match_tables()
    test_bezout_checksums()
    test_distinguished_points()
    test_equal_top_weights_give_two_points()
    test_kawamata_degree()
    test_local_types_with_several_units()
    test_family_79_basket_differs_from_printed_table()
    test_wellformed_and_quasismooth()
    print("=" * 50)
    print("🎉 加权射影空间测试全部通过")


if __name__ == '__main__':
    main()
