"""Torus solvers for the Cauchy problem"""
