"""
Utilities package
"""

from .hashing import sha256_file, sha256_text

__all__ = ['sha256_file', 'sha256_text']
