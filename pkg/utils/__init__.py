# 基础设施：异常定义与族数据库
