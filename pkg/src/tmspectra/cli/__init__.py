"""tm-spectra CLI."""
