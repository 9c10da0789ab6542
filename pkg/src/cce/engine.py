"""End-to-end query path: tag a query, match each entity, shape the response.

This is the single code path behind both the CLI `query` command and the
HTTP service, so the two always produce identical results for identical
inputs.  The JSON layout is versioned via RESPONSE_VERSION.
"""

from __future__ import annotations

from dataclasses import dataclass

from cce.corpus import extract_entities
from cce.embeddings import EmbeddingProvider
from cce.matcher import Match, MatcherConfig, NoContentWordsError, StemIndex, build_index, match
from cce.synthesizer import Glossary
from cce.tagger import TaggerParams, tag

RESPONSE_VERSION = "1"


@dataclass(frozen=True)
class EntityResult:
    start: int
    end: int
    text: str
    matches: tuple[Match, ...]


@dataclass(frozen=True)
class QueryResponse:
    query: str
    entities: tuple[EntityResult, ...]

    def to_dict(self) -> dict:
        return {
            "version": RESPONSE_VERSION,
            "query": self.query,
            "entities": [
                {
                    "start": e.start,
                    "end": e.end,
                    "text": e.text,
                    "matches": [
                        {"cid": m.cid, "type": m.concept_type, "score": m.score}
                        for m in e.matches
                    ],
                }
                for e in self.entities
            ],
        }

    def to_text(self) -> str:
        """Human-readable listing; scores shown to 3 decimals."""
        lines = [f"query: {self.query}"]
        if not self.entities:
            lines.append("  (no entities)")
        for number, entity in enumerate(self.entities, start=1):
            lines.append(f"entity {number}: {entity.text} [{entity.start}:{entity.end}]")
            if not entity.matches:
                lines.append("    (no matches)")
            for m in entity.matches:
                lines.append(f"    ('{m.cid}', '{m.concept_type}', {m.score:.3f})")
        return "\n".join(lines)


class QueryEngine:
    """Immutable bundle of model, embeddings and glossary index."""

    def __init__(
        self,
        params: TaggerParams,
        provider: EmbeddingProvider,
        glossary: Glossary,
        config: MatcherConfig | None = None,
    ):
        self.params = params
        self.provider = provider
        self.glossary = glossary
        self.config = config if config is not None else MatcherConfig()
        self.index: StemIndex = build_index(glossary, self.config)

    def respond(self, query_text: str) -> QueryResponse:
        sentence = tag(self.params, self.provider, query_text)
        entities: list[EntityResult] = []
        for span in extract_entities(sentence):
            try:
                matches = match(span, self.index, self.provider, self.config)
            except NoContentWordsError:
                matches = []
            entities.append(
                EntityResult(
                    start=span.start, end=span.end, text=span.text, matches=tuple(matches)
                )
            )
        return QueryResponse(query=query_text, entities=tuple(entities))
