"""Benchmark toolkit for LLM structure elucidation from MS/MS spectra."""

__version__ = "0.1.0"
