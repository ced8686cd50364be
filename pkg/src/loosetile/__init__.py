"""Loose 6-cycle tilings of 3-uniform hypergraphs."""
