"""
API模块初始化文件，命名空间在 app/__init__.py 中注册
"""
