"""
Gram matrix cache keyed by (model, basis) object identity.
Shared by the decomposition and connection stages, guarded by a lock and
bounded: the least recently used entry is evicted past ``max_entries``.
"""
import threading
from collections import OrderedDict
from typing import Callable, Optional, Tuple

from src.config.settings import settings
from src.linalg.scalar import Mat


class GramCache:
    def __init__(self, max_entries: Optional[int] = None):
        self._lock = threading.Lock()
        self._entries: "OrderedDict[Tuple[str, int, int], Tuple[object, object, Mat]]" = OrderedDict()
        self.max_entries = max_entries
        self.hits = 0
        self.misses = 0

    @property
    def capacity(self) -> int:
        return self.max_entries if self.max_entries is not None else settings.gram_cache_size

    def __len__(self) -> int:
        with self._lock:
            return len(self._entries)

    def _make_key(self, kind: str, model, basis) -> Tuple[str, int, int]:
        return kind, id(model), id(basis)

    def _lookup(self, kind: str, model, basis):
        key = self._make_key(kind, model, basis)
        entry = self._entries.get(key)
        # ids can be reused after collection, so the stored objects must match
        if entry is None or entry[0] is not model or entry[1] is not basis:
            return None
        self._entries.move_to_end(key)
        return entry[2]

    def get(self, kind: str, model, basis):
        with self._lock:
            return self._lookup(kind, model, basis)

    def set(self, kind: str, model, basis, gram: Mat):
        with self._lock:
            key = self._make_key(kind, model, basis)
            self._entries[key] = (model, basis, gram)
            self._entries.move_to_end(key)
            while len(self._entries) > self.capacity:
                self._entries.popitem(last=False)

    def get_or_compute(self, kind: str, model, basis, compute_fn: Callable[[], Mat]) -> Mat:
        with self._lock:
            cached = self._lookup(kind, model, basis)
            if cached is not None:
                self.hits += 1
                return cached
            self.misses += 1
        gram = compute_fn()
        self.set(kind, model, basis, gram)
        return gram

    def clear(self):
        with self._lock:
            self._entries.clear()
            self.hits = 0
            self.misses = 0


gram_cache = GramCache()
