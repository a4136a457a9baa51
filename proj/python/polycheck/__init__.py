"""Verification of simple string-to-string programs."""

from ._core import CompileError, interpretation, metrics, run, signature, simple, verify

__all__ = ["CompileError", "interpretation", "metrics", "run", "signature", "simple", "verify"]
