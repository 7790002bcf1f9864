"""Tests for the ciltlab package."""
