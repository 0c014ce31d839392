"""Scenario clock backing ``now()``."""

from dataclasses import dataclass
from datetime import datetime, timedelta
from typing import Union

from rdflib import Literal

from cwp_verifier.errors import ClockRegression
from cwp_verifier.triples.terms import DATETIME_FORMAT, datetime_literal

DEFAULT_CLOCK = "2016-01-01T00:00:00"


@dataclass
class Clock:
    """Externally settable current time. Never moves backwards."""

    current: datetime

    @classmethod
    def at(cls, when: Union[str, datetime, None] = None) -> "Clock":
        if when is None:
            when = DEFAULT_CLOCK
        if isinstance(when, str):
            when = datetime.strptime(when, DATETIME_FORMAT)
        return cls(when.replace(microsecond=0))

    def now(self) -> Literal:
        return datetime_literal(self.current)

    def advance_to(self, when: Union[str, datetime]) -> None:
        """Move the clock forward.

        Raises:
            ClockRegression: If ``when`` is earlier than the current time
        """
        if isinstance(when, str):
            when = datetime.strptime(when, DATETIME_FORMAT)
        if when < self.current:
            raise ClockRegression(
                f"clock cannot move back from {self.current:{DATETIME_FORMAT}} "
                f"to {when:{DATETIME_FORMAT}}"
            )
        self.current = when

    def offset(self, days: int) -> Literal:
        """A dateTime literal ``days`` away from now (negative is the past)."""
        return datetime_literal(self.current + timedelta(days=days))

    def copy(self) -> "Clock":
        return Clock(self.current)

    def __str__(self) -> str:
        return self.current.strftime(DATETIME_FORMAT)
