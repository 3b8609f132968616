"""Database configuration and connection management."""
