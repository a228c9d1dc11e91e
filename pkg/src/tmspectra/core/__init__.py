"""tm-spectra numerical engines."""
