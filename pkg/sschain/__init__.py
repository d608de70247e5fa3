"""
sschain - self-similar quasi-continuous chain toolkit
Self-similar Laplacian, Weierstrass-Mandelbrot dispersion and wave dynamics
"""

__version__ = "1.0.0"
