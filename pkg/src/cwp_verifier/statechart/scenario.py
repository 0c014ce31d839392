"""Scenario events driving a simulation."""

from dataclasses import dataclass, field
from datetime import datetime
from typing import Optional, Union

from rdflib import URIRef

from cwp_verifier.errors import ClockRegression, UnknownObject
from cwp_verifier.triples.store import Node
from cwp_verifier.triples.terms import DATETIME_FORMAT


@dataclass(frozen=True)
class At:
    when: datetime
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Create:
    name: URIRef
    cls: URIRef
    properties: tuple[tuple[URIRef, Node], ...] = ()
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class SetValue:
    name: URIRef
    property: URIRef
    value: Node
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class ClearValue:
    name: URIRef
    property: URIRef
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Run:
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class ExpectState:
    name: URIRef
    label: str
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class CheckConstraints:
    expected: tuple[str, ...] = ()
    line: int = field(default=0, compare=False)


Event = Union[At, Create, SetValue, ClearValue, Run, ExpectState, CheckConstraints]


@dataclass
class Scenario:
    """An ordered list of events with a name."""

    name: str
    events: list[Event] = field(default_factory=list)

    def validate(self, start: Optional[datetime] = None) -> None:
        """Check ordering invariants before anything is simulated.

        Args:
            start: Clock the simulation starts from

        Raises:
            ClockRegression: If an ``at`` event moves time backwards
            UnknownObject: If an event names an object before its ``create``
        """
        current = start
        created: set[URIRef] = set()
        for event in self.events:
            if isinstance(event, At):
                if current is not None and event.when < current:
                    raise ClockRegression(
                        f"scenario {self.name} moves the clock back to "
                        f"{event.when:{DATETIME_FORMAT}}",
                        line=event.line or None,
                    )
                current = event.when
            elif isinstance(event, Create):
                created.add(event.name)
            elif isinstance(event, (SetValue, ClearValue, ExpectState)) and event.name not in created:
                raise UnknownObject(
                    f"scenario {self.name} uses {event.name} before creating it",
                    subject=str(event.name),
                    line=event.line or None,
                )
