"""Analytic and discrete Radon transforms of parametric phantoms."""
