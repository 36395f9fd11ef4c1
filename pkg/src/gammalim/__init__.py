"""Gamma, polygamma and their ratio limits at the negative-integer poles."""
