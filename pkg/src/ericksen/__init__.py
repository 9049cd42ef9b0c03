"""Phase-field minimization of the Ericksen energy for nematic droplets.

Core layout: potential (double-well W), orbit1d (connecting orbits and the
surface tension alpha0), fields (grids and operators), energy (densities and
validation), minimize (projected gradient flow), interface (level sets and
isoperimetric diagnostics), experiments (scenario drivers), service (FastAPI
wrapper), cli (thin client).
"""

__version__ = "0.1.0"
