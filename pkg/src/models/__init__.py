"""Dispersion symbols and norms"""
