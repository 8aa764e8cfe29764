"""Exact certification of finite group-theoretic kernels."""
