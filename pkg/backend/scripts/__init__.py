"""Scripts for the interval coloring toolkit"""
