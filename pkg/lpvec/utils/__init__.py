"""Filesystem and timing helpers."""
