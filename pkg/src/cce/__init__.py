"""Clinical concept extraction for short user queries.

Two stages: a BiLSTM-CRF tagger marks entity spans in a query, and an
embedding-based coverage score ranks matching glossary terms per entity.
Includes the synthetic-corpus pipeline, evaluation/grid-search harnesses,
a CLI (``cce``) and a small HTTP service.
"""

__version__ = "0.1.0"
