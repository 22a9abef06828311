"""Tests for lvlab."""
