# Robust (k,z)-clustering algorithms, checkers and instance tooling
__version__ = "0.1.0"
