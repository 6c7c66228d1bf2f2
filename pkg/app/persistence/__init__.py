"""
Persistence package: model bundle em arquivo único
"""

from .model_bundle import FORMAT_VERSION, ModelBundle, from_bytes, load_model, save_model, to_bytes

__all__ = ['FORMAT_VERSION', 'ModelBundle', 'from_bytes', 'load_model', 'save_model', 'to_bytes']
