"""Numeric probes: counterexamples, kernel, calculus checks"""
