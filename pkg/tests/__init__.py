"""Tests for back-and-forth package."""
