"""Exact H-coloring counts for trees and certificates comparing path-like tree families."""

__version__ = "0.1.0"
