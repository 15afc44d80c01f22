"""Ledger of numerical choices and regularizations made during a computation."""

from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional

from src.utils.logger import get_logger

logger = get_logger(__name__)

LEDGER_LEVELS = ('info', 'warning')


@dataclass(frozen=True)
class LedgerEntry:
    """One recorded choice: what fired, where, and with which parameters."""

    kind: str
    message: str
    source: str
    details: Dict[str, Any] = field(default_factory=dict)
    level: str = 'info'

    def to_dict(self) -> Dict[str, Any]:
        return {
            'kind': self.kind,
            'source': self.source,
            'message': self.message,
            'details': dict(self.details),
        }


class ChoiceLedger:
    """
    Collects the regularizations and conventions that fired in a computation.

    Results of numerical operations carry their own entries; the CLI merges them
    into a run ledger and embeds it in every report.
    """

    def __init__(self, entries: Optional[Iterable[LedgerEntry]] = None):
        self._entries: List[LedgerEntry] = list(entries or [])

    def record(
        self,
        kind: str,
        message: str,
        source: str,
        level: str = 'info',
        **details: Any
    ) -> LedgerEntry:
        """
        Record one entry and log it.

        Args:
            kind: Short machine-readable tag (e.g. 'near-zero-floor')
            message: Human-readable description
            source: Operation that made the choice
            level: 'info' or 'warning'
            **details: Parameters of the choice

        Returns:
            The recorded entry
        """
        if level not in LEDGER_LEVELS:
            level = 'info'
        entry = LedgerEntry(kind=kind, message=message, source=source, details=details, level=level)
        self._entries.append(entry)

        if level == 'warning':
            logger.warning(f"{source}: {message}")
        else:
            logger.info(f"{source}: {message}")
        return entry

    def extend(self, entries: Iterable[LedgerEntry]) -> None:
        """Append entries from another computation, skipping exact duplicates."""
        for entry in entries:
            if entry not in self._entries:
                self._entries.append(entry)

    @property
    def entries(self) -> List[LedgerEntry]:
        return list(self._entries)

    def kinds(self) -> List[str]:
        return [entry.kind for entry in self._entries]

    def to_list(self) -> List[Dict[str, Any]]:
        return [entry.to_dict() for entry in self._entries]

    def __len__(self) -> int:
        return len(self._entries)

    def __bool__(self) -> bool:
        return bool(self._entries)
