"""Marked posets and their marked chain-order polytopes, computed exactly."""
