"""Grids, transforms, reports, configuration and errors shared by the lab"""
