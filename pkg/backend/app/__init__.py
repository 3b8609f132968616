"""Interval edge-coloring toolkit for complete graphs"""
