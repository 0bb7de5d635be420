"""Per-feature signal table.

Holds every named utility/redundancy signal for every feature, both signals
computed in-package (entropy, MI, correlation, ...) and externally produced
ones ingested from file (mean-|SHAP|, attention weights, entity indicators).
Raw values are kept; min-max normalized values are filled in by the scoring
stage.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from ballast.errors import DataError

UTILITY = "utility"
REDUNDANCY = "redundancy"
SIGNAL_KINDS = (UTILITY, REDUNDANCY)


@dataclass(frozen=True)
class SignalEntry:
    feature_id: str
    signal: str
    kind: str
    raw: float
    normalized: float | None = None

    def __post_init__(self):
        if self.kind not in SIGNAL_KINDS:
            raise DataError(f"unknown signal kind {self.kind!r}")
        if self.normalized is not None and not (0.0 <= self.normalized <= 1.0):
            raise DataError(
                f"normalized value {self.normalized} for ({self.feature_id}, {self.signal}) outside [0,1]"
            )


class SignalTable:
    """(feature, signal) -> entry map preserving insertion order."""

    def __init__(self, entries=()):
        self._entries: dict[tuple[str, str], SignalEntry] = {}
        self._features: list[str] = []
        self._signals: list[str] = []
        for e in entries:
            self.add_entry(e)

    def add_entry(self, entry: SignalEntry) -> None:
        key = (entry.feature_id, entry.signal)
        if key in self._entries:
            raise DataError(f"duplicate signal entry for {key}")
        self._entries[key] = entry
        if entry.feature_id not in self._features:
            self._features.append(entry.feature_id)
        if entry.signal not in self._signals:
            self._signals.append(entry.signal)

    def add(self, feature_id: str, signal: str, kind: str, raw: float) -> None:
        self.add_entry(SignalEntry(str(feature_id), str(signal), kind, float(raw)))

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, key) -> bool:
        return tuple(key) in self._entries

    def entries(self) -> list[SignalEntry]:
        return list(self._entries.values())

    @property
    def features(self) -> list[str]:
        """Feature ids in first-appearance order."""
        return list(self._features)

    @property
    def signals(self) -> list[str]:
        """Signal names in first-appearance order."""
        return list(self._signals)

    def get(self, feature_id: str, signal: str) -> SignalEntry:
        try:
            return self._entries[(feature_id, signal)]
        except KeyError:
            raise DataError(f"no signal {signal!r} for feature {feature_id!r}") from None

    def signal_kind(self, signal: str) -> str:
        for e in self._entries.values():
            if e.signal == signal:
                return e.kind
        raise DataError(f"no such signal: {signal!r}")

    def raw_values(self, signal: str) -> dict[str, float]:
        return {e.feature_id: e.raw for e in self._entries.values() if e.signal == signal}

    def normalized_values(self, signal: str) -> dict[str, float]:
        out = {}
        for e in self._entries.values():
            if e.signal == signal:
                if e.normalized is None:
                    raise DataError(f"signal {signal!r} not normalized yet")
                out[e.feature_id] = e.normalized
        return out

    def with_normalized(self, normalized: dict[tuple[str, str], float]) -> "SignalTable":
        """Copy of the table with normalized values filled in."""
        out = SignalTable()
        for key, e in self._entries.items():
            out.add_entry(replace(e, normalized=normalized.get(key, e.normalized)))
        return out

    def merged_with(self, other: "SignalTable") -> "SignalTable":
        out = SignalTable(self.entries())
        for e in other.entries():
            out.add_entry(e)
        return out
