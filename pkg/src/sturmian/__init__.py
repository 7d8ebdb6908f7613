"""Variational Sturmian approximation for one-dimensional bound states."""
