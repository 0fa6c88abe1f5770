"""Unit test package for netefficacy."""
