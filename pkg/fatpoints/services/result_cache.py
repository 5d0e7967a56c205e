"""
Persistent cache of generic Hilbert function values.

Append-only JSON lines; the whole file is indexed in memory at startup.
"""

import logging
import threading
from datetime import datetime, timezone
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ValidationError

from fatpoints.engines.interpolation_engine import HilbertValue
from fatpoints.services.errors import CacheIntegrityError

logger = logging.getLogger(__name__)

CacheKey = Tuple[int, Tuple[int, ...], int, int, int, int]


class CacheEntry(BaseModel):
    key: List
    value: HilbertValue
    timestamp: str


def _normalize(key) -> CacheKey:
    n, entries, m, modulus, seed, trials = key
    return (int(n), tuple(sorted((int(k) for k in entries), reverse=True)), int(m),
            int(modulus), int(seed), int(trials))


class ResultCache:
    def __init__(self, path: str):
        self.path = Path(path)
        self.entries: Dict[CacheKey, HilbertValue] = {}
        self.lock = threading.Lock()
        self.hits = 0
        self.misses = 0
        self.load()

    def load(self):
        """Build the in-memory index; a torn last line is skipped"""
        if not self.path.exists():
            return
        with self.path.open('r', encoding='utf-8') as handle:
            for number, line in enumerate(handle, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    entry = CacheEntry.model_validate_json(line)
                except ValidationError:
                    logger.warning("skipping unreadable cache line %d in %s", number, self.path)
                    continue
                key = _normalize(entry.key)
                known = self.entries.get(key)
                if known is not None and known != entry.value:
                    raise CacheIntegrityError(f"cache line {number} contradicts an earlier value for {key}")
                self.entries[key] = entry.value
        logger.info("loaded %d cache entries from %s", len(self.entries), self.path)

    def get(self, key) -> Optional[HilbertValue]:
        with self.lock:
            value = self.entries.get(_normalize(key))
            if value is None:
                self.misses += 1
            else:
                self.hits += 1
            return value

    def put(self, key, value: HilbertValue):
        key = _normalize(key)
        with self.lock:
            known = self.entries.get(key)
            if known is not None:
                if known != value:
                    raise CacheIntegrityError(f"{key} already cached as {known.value}, refusing {value.value}")
                return
            entry = CacheEntry(
                key=[key[0], list(key[1]), *key[2:]],
                value=value,
                timestamp=datetime.now(timezone.utc).isoformat(),
            )
            self.path.parent.mkdir(parents=True, exist_ok=True)
            # a line is written whole by a single write
            with self.path.open('a', encoding='utf-8') as handle:
                handle.write(entry.model_dump_json() + "\n")
                handle.flush()
            self.entries[key] = value

    def get_status(self):
        return {
            'path': str(self.path),
            'entries': len(self.entries),
            'hits': self.hits,
            'misses': self.misses,
        }

    def __len__(self) -> int:
        return len(self.entries)
