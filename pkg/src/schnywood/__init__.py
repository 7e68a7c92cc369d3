"""Schnyder woods of finite and lazily materialized infinite random
triangulations: exact counting, sampling, peeling constructions, structural
verification, and embeddings."""

__version__ = "0.1.0"
