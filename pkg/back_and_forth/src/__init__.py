"""Source modules for back-and-forth."""
