"""Pakiet danych: presety eksperymentów."""
