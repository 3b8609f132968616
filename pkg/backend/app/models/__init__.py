"""Domain models: orderings, matchings, colorings, factorizations, bounds and stored witnesses."""
