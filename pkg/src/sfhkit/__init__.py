"""Sutured Floer homology engine over F2."""
