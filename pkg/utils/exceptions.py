# -*- coding: utf-8 -*-
"""
异常定义 - 计算错误与数据库错误
"""

from typing import List, Optional


class WCIFanoError(Exception):
    """所有领域错误的基类，可选携带族编号和字段名"""

    def __init__(self, message: str, family_no: Optional[int] = None, field: Optional[str] = None):
        self.message = message
        self.family_no = family_no
        self.field = field
        super().__init__(self.__str__())

    def __str__(self) -> str:
        prefix = []
        if self.family_no is not None:
            prefix.append(f"family {self.family_no}")
        if self.field:
            prefix.append(self.field)
        if prefix:
            return f"{': '.join(prefix)}: {self.message}"
        return self.message


class AmbiguousStratum(WCIFanoError):
    """限制方程组在应当有限的层上不是0维"""


class NonIntegralCount(WCIFanoError):
    """计数不是非负整数（翻转曲线条数或奇点个数）"""


class UnknownLemmaTag(WCIFanoError):
    """分层条目引用了未知的引理标签"""


class NotEliminable(WCIFanoError):
    """坐标点处没有可线性消去的变量"""


class PointNotOnCurve(WCIFanoError):
    """坐标点不在 L_xy 上"""


class IncompleteData(WCIFanoError):
    """证书所需的数据库条目缺失"""


class NoMatchingFamily(WCIFanoError):
    """七元组找不到对应的族"""


class NonPositiveDPrime(WCIFanoError):
    """d' = Σa - 1 - d 不是正整数"""


class FamilyDBError(WCIFanoError):
    """数据库错误基类，携带全部违例"""

    def __init__(self, message: str, violations: Optional[List[str]] = None,
                 family_no: Optional[int] = None, field: Optional[str] = None):
        self.violations = list(violations or [])
        super().__init__(message, family_no=family_no, field=field)


class ParseError(FamilyDBError):
    """数据库文件不是合法JSON"""


class SchemaError(FamilyDBError):
    """数据库结构不符合文档约定"""


class CrossRefError(FamilyDBError):
    """数据库交叉引用无法解析"""
