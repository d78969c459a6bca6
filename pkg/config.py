#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
加权完全交Fano三维簇证书平台配置文件
"""

import os
from dotenv import load_dotenv

# 加载环境变量
load_dotenv()

class Config:
    """应用配置类"""

    # 数据库配置
    DB_PATH = os.getenv('WCIFANO_DB', 'data/families.json')

    # 日志配置
    LOG_LEVEL = os.getenv('WCIFANO_LOG_LEVEL', 'WARNING').upper()
    LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'

    # 证书报告输出目录
    REPORT_DIR = os.getenv('WCIFANO_REPORT_DIR', 'reports')

    # 非零参数(λ, μ, ...)的实例化素数
    PARAM_PRIMES = (2, 3, 5, 7, 11, 13)
    ALT_PARAM_PRIMES = (17, 19, 23, 29, 31, 37)

    # 有限域证伪器
    FALSIFIER_PRIME = 2147483647  # 2^31 - 1
    FALSIFIER_MEMBERS = int(os.getenv('WCIFANO_FALSIFIER_MEMBERS', 3))
    FALSIFIER_SEED = int(os.getenv('WCIFANO_SEED', 20240601))

    # 全局 lct = 1 的族
    THEOREM_LCT1_FAMILIES = (42, 55, 66, 68, 69, 77, 79, 80, 81, 82, 83)

    @classmethod
    def resolve_db_path(cls, cli_path=None):
        """数据库路径优先级: --db > WCIFANO_DB > 默认值"""
        if cli_path:
            return cli_path
        return os.getenv('WCIFANO_DB', cls.DB_PATH)

class DevelopmentConfig(Config):
    """开发环境配置"""
    LOG_LEVEL = os.getenv('WCIFANO_LOG_LEVEL', 'DEBUG').upper()

class ProductionConfig(Config):
    """生产环境配置"""
    LOG_LEVEL = os.getenv('WCIFANO_LOG_LEVEL', 'WARNING').upper()

# 配置字典
config_map = {
    'development': DevelopmentConfig,
    'production': ProductionConfig,
    'default': ProductionConfig
}

def get_config(config_name=None):
    """获取配置"""
    if config_name is None:
        config_name = os.getenv('WCIFANO_ENV', 'default')

    return config_map.get(config_name, ProductionConfig)
