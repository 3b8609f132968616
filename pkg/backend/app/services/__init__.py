"""Graph, coloring, construction, bound and search algorithms."""
