# GroverLab: Grover search simulation and circuit compilation
__version__ = "1.0.0"
