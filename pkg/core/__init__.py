"""
Planar Gap Lab - Core Modules

This package contains the library behind the `gap_cli` command line:
- graphs: weighted graphs, the hat-tree family and its level quotients
- spectral: Laplacians, lambda_1 solvers and Cheeger constants
- walks: distances and lazy random walk mixing
- verification: numeric certificates for the spectral gap argument
"""

__version__ = "1.0.0"
