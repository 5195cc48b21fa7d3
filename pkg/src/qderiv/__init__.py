"""Knot invariants from derivations of finite quandles."""
