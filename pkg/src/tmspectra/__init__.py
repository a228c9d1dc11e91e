"""tm-spectra: spectral and fractal characteristics of generalized Thue-Morse measures."""

__version__ = "0.1.0"
