"""
Orchestrator package
"""

from .pipeline_runner import PipelineRunner, PreparedData, encode_corpus

__all__ = ['PipelineRunner', 'PreparedData', 'encode_corpus']
