"""Isomonodromic tau functions of Painleve VI and Garnier systems from
Fredholm determinants and combinatorial series."""

__version__ = "0.1.0"
