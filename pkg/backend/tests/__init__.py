"""Test suite for the interval coloring toolkit."""
