"""HTTP suggestion service: top-k suggestions, engineer confirmations,
model info and rebuilds.

Suggest calls read an immutable model snapshot; confirmations append to a
durable newline-delimited JSON log; a rebuild trains a fresh model from the
base dataset plus every logged confirmation and swaps it in atomically, so
in-flight suggestions finish against the old snapshot.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from .classifiers import Model, predict, serialize_model, train_model
from .data import Dataset, SignalPair, load_library, load_pairs
from .preprocess import clean, normalize, tokenize
from .rerank import AntonymTable, KeywordSet, rerank

logger = logging.getLogger(__name__)

MAX_K = 50


@dataclass(frozen=True)
class Confirmation:
    """An engineer's confirmed customer-name -> library-name assignment."""

    customer_signal: str
    chosen_label: str
    timestamp: str  # UTC instant, ISO 8601
    source: str

    def to_pair(self) -> SignalPair:
        return SignalPair(
            project_id=f"confirmed:{self.source or 'unknown'}",
            customer_signal=self.customer_signal,
            library_signal=self.chosen_label,
        )


@dataclass
class ServiceConfig:
    pairs_path: str
    library_path: str
    antonyms_path: str | None = None
    keywords_path: str | None = None
    confirm_log_path: str = "confirmations.ndjson"
    method: str = "tokvote"
    default_k: int = 10
    alpha: float = 1.0
    max_n: int = 3


class MatcherService:
    """Owns the served model, the confirmation log and the rebuild path."""

    def __init__(self, config: ServiceConfig) -> None:
        self.config = config
        self.base_dataset = load_pairs(config.pairs_path)
        self.library = load_library(config.library_path)
        self.antonyms = (
            AntonymTable.load(config.antonyms_path)
            if config.antonyms_path
            else AntonymTable.empty()
        )
        self.keywords = (
            KeywordSet.load(config.keywords_path)
            if config.keywords_path
            else KeywordSet.empty()
        )
        self._log_path = Path(config.confirm_log_path)
        self._write_lock = threading.Lock()
        # (model, version, n_training_pairs) swapped as one reference so a
        # reader never sees a half-updated combination
        self._served: tuple[Model, str, int] | None = None
        self.rebuild()

    # -- confirmation log ---------------------------------------------------

    def confirmations(self) -> list[Confirmation]:
        if not self._log_path.exists():
            return []
        records = []
        with open(self._log_path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                doc = json.loads(line)
                records.append(
                    Confirmation(
                        customer_signal=doc["signal"],
                        chosen_label=doc["chosen"],
                        timestamp=doc["timestamp"],
                        source=doc.get("source", "unknown"),
                    )
                )
        return records

    def confirm(self, signal: str, chosen: str, source: str) -> Confirmation:
        """Validate and durably append one confirmation."""
        if not signal.strip():
            raise ValueError("signal must be nonempty")
        if normalize(chosen) not in self.library:
            raise KeyError(f"label {chosen!r} is not in the signal library")
        record = Confirmation(
            customer_signal=signal,
            chosen_label=normalize(chosen),
            timestamp=datetime.now(timezone.utc).isoformat(),
            source=source,
        )
        line = json.dumps(
            {
                "signal": record.customer_signal,
                "chosen": record.chosen_label,
                "source": record.source,
                "timestamp": record.timestamp,
            },
            ensure_ascii=False,
        )
        with self._write_lock:
            with open(self._log_path, "a", encoding="utf-8") as fh:
                fh.write(line + "\n")
                fh.flush()
                os.fsync(fh.fileno())
        return record

    # -- model lifecycle ----------------------------------------------------

    def rebuild(self) -> str:
        """Train a fresh model from base data + confirmations, then swap it in.

        Training happens outside the served reference; failures leave the old
        model serving.  Returns the new model version id.
        """
        pairs = list(self.base_dataset.pairs)
        pairs += [c.to_pair() for c in self.confirmations()]
        cleaned, _ = clean(Dataset(pairs), self.library)
        if not cleaned.pairs:
            logger.warning("rebuild: no usable training pairs, serving no model")
            self._served = None
            return "none"
        model = train_model(
            self.config.method,
            cleaned,
            alpha=self.config.alpha,
            max_n=self.config.max_n,
        )
        serialized = serialize_model(model)
        version = "sha256:" + hashlib.sha256(serialized.encode("utf-8")).hexdigest()[:16]
        # single reference assignment: readers see either the old or new model
        self._served = (model, version, len(cleaned.pairs))
        logger.info("rebuild: serving %s (%d pairs)", version, len(cleaned.pairs))
        return version

    # -- queries --------------------------------------------------------------

    def suggest(self, signal: str, k: int) -> dict:
        if not signal.strip():
            raise ValueError("signal must be nonempty")
        if not 1 <= k <= MAX_K:
            raise ValueError(f"k must be in [1, {MAX_K}], got {k}")
        served = self._served
        if served is None:
            raise RuntimeError("no model loaded")
        model, version, _ = served
        preds = predict(model, signal, k)
        preds = rerank(
            tokenize(normalize(signal)), preds, self.antonyms, self.keywords
        )
        return {
            "entries": [
                {"label": label, "score": score} for label, score in preds.entries
            ],
            "fallback": preds.fallback,
            "model_version": version,
        }

    def model_info(self) -> dict:
        served = self._served
        version, n_pairs = ("none", 0) if served is None else (served[1], served[2])
        return {
            "method": self.config.method,
            "model_version": version,
            "n_training_pairs": n_pairs,
            "n_base_pairs": len(self.base_dataset.pairs),
            "n_confirmations": len(self.confirmations()),
            "n_library_names": len(self.library),
            "default_k": self.config.default_k,
        }


class SuggestRequest(BaseModel):
    signal: str
    k: int | None = None


class ConfirmRequest(BaseModel):
    signal: str
    chosen: str
    source: str = "unknown"


def create_app(service: MatcherService, ui_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="signalmatch")

    @app.post("/api/suggest")
    def suggest(req: SuggestRequest) -> dict:
        k = req.k if req.k is not None else service.config.default_k
        try:
            return service.suggest(req.signal, k)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        except RuntimeError as exc:
            raise HTTPException(status_code=503, detail=str(exc))

    @app.post("/api/confirm", status_code=201)
    def confirm(req: ConfirmRequest) -> dict:
        try:
            record = service.confirm(req.signal, req.chosen, req.source)
        except (ValueError, KeyError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        except OSError as exc:
            raise HTTPException(status_code=500, detail=f"log write failed: {exc}")
        return {
            "signal": record.customer_signal,
            "chosen": record.chosen_label,
            "timestamp": record.timestamp,
        }

    @app.post("/api/rebuild")
    def rebuild() -> dict:
        try:
            version = service.rebuild()
        except Exception as exc:  # old model keeps serving
            logger.exception("rebuild failed")
            raise HTTPException(status_code=500, detail=f"rebuild failed: {exc}")
        return {"model_version": version}

    @app.get("/api/model")
    def model_info() -> dict:
        return service.model_info()

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    if ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
