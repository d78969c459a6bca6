# 计算与报告服务：精确算术、加权射影模型、孤立类、翻转曲线、L_xy、判据与证书
