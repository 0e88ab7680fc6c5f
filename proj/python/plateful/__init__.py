"""Review search, sentiment and tagging engine."""

import json

from ._plateful import (
    ArgumentError,
    DataError,
    Error,
    IoError,
    ModelMissingError,
    average_precision_at_k,
    cosine,
    extract_tags,
    lexical_search,
    reciprocal_rank,
    run_cli,
    tokenize,
)
from ._plateful import _Api


class Engine:
    """In-process view of the HTTP API. Every call returns (status, body)."""

    def __init__(self, reviews, services="", embeddings="", embed_dim=50, ranker="", sentiment=""):
        self._api = _Api(str(reviews), str(services), str(embeddings), embed_dim, str(ranker), str(sentiment))

    @staticmethod
    def _decode(reply):
        status, body = reply
        return status, json.loads(body)

    def health(self):
        return self._decode(self._api.health())

    def services(self):
        return self._decode(self._api.list_services())

    def reviews(self, service_id, **params):
        return self._decode(self._api.list_reviews(service_id, {k: str(v) for k, v in params.items()}))

    def search(self, q, **params):
        params = {k: str(v) for k, v in params.items()}
        params["q"] = q
        return self._decode(self._api.search(params))

    def submit(self, review):
        return self._decode(self._api.submit_review(json.dumps(review)))


__all__ = [
    "ArgumentError",
    "DataError",
    "Engine",
    "Error",
    "IoError",
    "ModelMissingError",
    "average_precision_at_k",
    "cosine",
    "extract_tags",
    "lexical_search",
    "reciprocal_rank",
    "run_cli",
    "tokenize",
]
