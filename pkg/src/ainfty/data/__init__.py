"""Shipped data files (report schema, frozen fixture data)."""
