"""Append-only JSON-lines event log backing the studio.

One JSON object per line, flushed and fsynced per append. Replay of any
prefix of the log yields a consistent state; a torn final line (crash
mid-write) is tolerated and ignored.
"""

from __future__ import annotations

import json
import logging
import os
import threading
from pathlib import Path

log = logging.getLogger(__name__)


class EventStore:
    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._fh = open(self.path, "a", encoding="utf-8")

    def append(self, event: dict) -> None:
        line = json.dumps(event, ensure_ascii=False, sort_keys=True)
        with self._lock:
            self._fh.write(line + "\n")
            self._fh.flush()
            os.fsync(self._fh.fileno())

    def replay(self) -> list[dict]:
        if not self.path.exists():
            return []
        events = []
        with open(self.path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    events.append(json.loads(line))
                except json.JSONDecodeError:
                    # Only a crash-torn tail is recoverable; stop there.
                    log.warning("%s:%d: unparseable event line, ignoring rest", self.path, lineno)
                    break
        return events

    def close(self) -> None:
        with self._lock:
            self._fh.close()
