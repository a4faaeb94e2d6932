"""Linear algebra and presentation helpers."""
