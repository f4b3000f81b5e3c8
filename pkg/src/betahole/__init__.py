"""Symbolic dynamics of the beta-transformation with a hole at 0, for multinacci beta."""
