#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
加权完全交Fano三维簇证书平台命令行入口
"""

import argparse
import logging
import sys

from config import get_config
from services.report_service import EXIT_DIFF, ReportService
from utils.exceptions import FamilyDBError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='wcifano',
                                     description='余维2加权完全交Fano三维簇的 LCT 证书检查')
    parser.add_argument('--db', help='族数据库路径（默认读取 WCIFANO_DB 或 data/families.json）')
    parser.add_argument('-v', '--verbose', action='store_true', help='输出 DEBUG 日志')
    sub = parser.add_subparsers(dest='command', required=True)

    tables = sub.add_parser('tables', help='复算表格并与记录比对')
    tables.add_argument('which', type=int, choices=[1, 2, 3, 4])

    certify = sub.add_parser('certify', help='组装逐点类 LCT 证书')
    group = certify.add_mutually_exclusive_group(required=True)
    group.add_argument('--family', type=int)
    group.add_argument('--all', action='store_true')
    certify.add_argument('--json', nargs='?', const='', default=None,
                         help='写出 JSON 证书；不给路径时写入报告目录')

    classify = sub.add_parser('classify', help='分类数值与 Kawamata 胀开次数')
    classify.add_argument('--family', type=int)

    superrigid = sub.add_parser('superrigid', help='仿射 Fano 四维簇超刚性检查')
    superrigid.add_argument('--septuple', required=True, help='格式 "d;a0,a1,a2,a3,a4,a5"')

    sub.add_parser('validate-db', help='校验数据库结构与交叉引用')
    return parser


def setup_logging(verbose: bool = False):
    config = get_config()
    logging.basicConfig(level=logging.DEBUG if verbose else config.LOG_LEVEL,
                        stream=sys.stderr, format=config.LOG_FORMAT, force=True)


def run(args) -> int:
    service = ReportService(args.db)
    try:
        if args.command == 'validate-db':
            text, code = service.cmd_validate_db()
        elif args.command == 'tables':
            text, code = service.cmd_tables(args.which)
        elif args.command == 'certify':
            text, code = service.cmd_certify(args.family, args.all, args.json)
        elif args.command == 'classify':
            text, code = service.cmd_classify(args.family)
        else:
            text, code = service.cmd_superrigid(args.septuple)
    except FamilyDBError as e:
        print(f"❌ 数据库无法加载: {e.message}", file=sys.stderr)
        for violation in e.violations:
            print(f"   {violation}", file=sys.stderr)
        return EXIT_DIFF
    except KeyError as e:
        print(f"❌ {e.args[0]}", file=sys.stderr)
        return EXIT_DIFF
    print(text)
    return code


def main(argv=None) -> int:
    """主函数"""
    if sys.version_info < (3, 8):
        print("❌ 错误: 需要Python 3.8或更高版本")
        return EXIT_DIFF
    args = build_parser().parse_args(argv)
    setup_logging(args.verbose)
    return run(args)


if __name__ == '__main__':
    sys.exit(main())
