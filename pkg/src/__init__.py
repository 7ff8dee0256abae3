"""
Boussinesq Lab
Spectral solver and numeric probes for the sixth-order Boussinesq equation
u_tt = u_xx + beta u_xxxx + u_xxxxxx + (u^2)_xx
"""

__version__ = "0.1.0"
