"""voicerag: corpus-to-knowledge-graph ingestion and a streaming
voice dialogue pipeline with deterministic paced stub backends."""

__version__ = "0.1.0"
