"""Shipped configuration presets (YAML data files)."""
