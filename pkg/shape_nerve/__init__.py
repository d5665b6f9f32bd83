"""
Shape Nerve - Delaunay shape complexes, vertex-star nerves and proximity relations
"""

__version__ = "0.1.0"
