"""Explicit-formula thresholds for L-functions near the edge of existence."""
