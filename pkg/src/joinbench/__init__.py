"""Workbench for the 48 process languages: parse, reduce, explore, encode, check."""
