"""API routers for colorings, constructions, bounds and witnesses."""
