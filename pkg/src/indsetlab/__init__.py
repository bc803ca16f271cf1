"""Independent-set sampling laboratory."""
