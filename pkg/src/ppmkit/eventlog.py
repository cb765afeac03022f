"""Modeling-event logs: event vocabulary, CSV parsing, validation, classification.

A session log is a CSV file (UTF-8, LF line endings) with the exact header

    seq,timestamp,event,object_id,object_type,x,y,label,source_id,target_id

holding one editor action per row, ordered by ``seq``. Timestamps are
ISO-8601 UTC with millisecond precision (``YYYY-MM-DDThh:mm:ss.sssZ``).
Labels follow RFC 4180 quoting; optional fields may be empty.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from enum import Enum


class EventKind(str, Enum):
    CREATE_START_EVENT = "CREATE_START_EVENT"
    CREATE_END_EVENT = "CREATE_END_EVENT"
    CREATE_ACTIVITY = "CREATE_ACTIVITY"
    CREATE_XOR = "CREATE_XOR"
    CREATE_AND = "CREATE_AND"
    CREATE_EDGE = "CREATE_EDGE"
    MOVE_START_EVENT = "MOVE_START_EVENT"
    MOVE_END_EVENT = "MOVE_END_EVENT"
    MOVE_ACTIVITY = "MOVE_ACTIVITY"
    MOVE_XOR = "MOVE_XOR"
    MOVE_AND = "MOVE_AND"
    MOVE_EDGE_LABEL = "MOVE_EDGE_LABEL"
    CREATE_EDGE_BENDPOINT = "CREATE_EDGE_BENDPOINT"
    MOVE_EDGE_BENDPOINT = "MOVE_EDGE_BENDPOINT"
    DELETE_EDGE_BENDPOINT = "DELETE_EDGE_BENDPOINT"
    DELETE_START_EVENT = "DELETE_START_EVENT"
    DELETE_END_EVENT = "DELETE_END_EVENT"
    DELETE_ACTIVITY = "DELETE_ACTIVITY"
    DELETE_XOR = "DELETE_XOR"
    DELETE_AND = "DELETE_AND"
    DELETE_EDGE = "DELETE_EDGE"
    RECONNECT_EDGE = "RECONNECT_EDGE"
    NAME_ACTIVITY = "NAME_ACTIVITY"
    RENAME_ACTIVITY = "RENAME_ACTIVITY"
    NAME_EDGE = "NAME_EDGE"
    RENAME_EDGE = "RENAME_EDGE"


class ObjectType(str, Enum):
    START_EVENT = "START_EVENT"
    END_EVENT = "END_EVENT"
    ACTIVITY = "ACTIVITY"
    XOR = "XOR"
    AND = "AND"
    EDGE = "EDGE"


class EventClass(Enum):
    """Action class of an event kind.

    RECONNECT is the marker for RECONNECT_EDGE, which stands for a delete
    plus a create of the same edge and is materialized by
    :func:`expand_reconnect` before any metric is computed.
    """

    CREATE = "Create"
    MOVE = "Move"
    DELETE = "Delete"
    OTHER = "Other"
    RECONNECT = "Reconnect"


_NODE_TYPES = {
    "START_EVENT": ObjectType.START_EVENT,
    "END_EVENT": ObjectType.END_EVENT,
    "ACTIVITY": ObjectType.ACTIVITY,
    "XOR": ObjectType.XOR,
    "AND": ObjectType.AND,
}

# Object type implied by each event kind.
KIND_OBJECT_TYPE: dict[EventKind, ObjectType] = {}
for _kind in EventKind:
    _name = _kind.value
    if _name.endswith("_EDGE") or "_EDGE_" in _name:
        KIND_OBJECT_TYPE[_kind] = ObjectType.EDGE
    else:
        _suffix = _name.split("_", 1)[1]
        KIND_OBJECT_TYPE[_kind] = _NODE_TYPES[_suffix]

# Bendpoint operations and edge-label moves all count as moving the edge.
_CLASS_OVERRIDES = {
    EventKind.CREATE_EDGE_BENDPOINT: EventClass.MOVE,
    EventKind.MOVE_EDGE_BENDPOINT: EventClass.MOVE,
    EventKind.DELETE_EDGE_BENDPOINT: EventClass.MOVE,
    EventKind.MOVE_EDGE_LABEL: EventClass.MOVE,
    EventKind.RECONNECT_EDGE: EventClass.RECONNECT,
}


def classify(kind: EventKind) -> EventClass:
    """Map an event kind to its action class. Total over EventKind."""
    override = _CLASS_OVERRIDES.get(kind)
    if override is not None:
        return override
    prefix = kind.value.split("_", 1)[0]
    if prefix == "CREATE":
        return EventClass.CREATE
    if prefix == "MOVE":
        return EventClass.MOVE
    if prefix == "DELETE":
        return EventClass.DELETE
    return EventClass.OTHER  # NAME_* / RENAME_*


class LogFormatError(ValueError):
    """Malformed or invalid event-log input; carries the offending line."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"{message} at line {line}"
        super().__init__(message)


CSV_HEADER = (
    "seq,timestamp,event,object_id,object_type,x,y,label,source_id,target_id"
)

_TS_FORMAT = "%Y-%m-%dT%H:%M:%S.%fZ"


def parse_timestamp(text: str) -> datetime:
    """Parse an ISO-8601 UTC timestamp with millisecond precision."""
    try:
        ts = datetime.strptime(text, _TS_FORMAT).replace(tzinfo=timezone.utc)
    except ValueError:
        raise ValueError(f"bad timestamp {text!r}") from None
    if ts.microsecond % 1000 != 0:
        raise ValueError(f"timestamp {text!r} not millisecond-aligned")
    return ts


def format_timestamp(ts: datetime) -> str:
    if ts.tzinfo is not None:
        ts = ts.astimezone(timezone.utc)
    return ts.strftime("%Y-%m-%dT%H:%M:%S.") + f"{ts.microsecond // 1000:03d}Z"


@dataclass(frozen=True)
class ModelingEvent:
    """One timestamped editor action on one model object."""

    seq: int
    timestamp: datetime
    kind: EventKind
    object_id: str
    object_type: ObjectType
    position: tuple[int, int] | None = None
    label: str | None = None
    source_id: str | None = None
    target_id: str | None = None

    def __post_init__(self):
        if self.seq < 1:
            raise ValueError(f"seq must be positive, got {self.seq}")
        if not self.object_id:
            raise ValueError("object_id must be non-empty")
        expected = KIND_OBJECT_TYPE[self.kind]
        if self.object_type is not expected:
            raise ValueError(
                f"{self.kind.value} implies object type {expected.value}, "
                f"got {self.object_type.value}"
            )
        if self.kind in (EventKind.CREATE_EDGE, EventKind.RECONNECT_EDGE):
            if not self.source_id or not self.target_id:
                raise ValueError(f"{self.kind.value} requires source_id and target_id")
        elif self.source_id or self.target_id:
            raise ValueError(f"{self.kind.value} must not carry edge endpoints")

    @property
    def event_class(self) -> EventClass:
        return classify(self.kind)

    def is_create(self) -> bool:
        return classify(self.kind) is EventClass.CREATE

    def is_delete(self) -> bool:
        return classify(self.kind) is EventClass.DELETE


@dataclass(frozen=True)
class EventLog:
    """An immutable, validated sequence of modeling events for one session."""

    session_id: str
    events: tuple[ModelingEvent, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "events", tuple(self.events))
        self._check_order()
        self._check_lifecycle()

    def _check_order(self):
        prev = None
        for ev in self.events:
            if prev is not None:
                if ev.seq <= prev.seq:
                    raise ValueError(
                        f"seq not strictly increasing: {prev.seq} then {ev.seq}"
                    )
                if ev.timestamp < prev.timestamp:
                    raise ValueError(f"timestamp regression at seq {ev.seq}")
            prev = ev

    def _check_lifecycle(self):
        # Every action needs a live object: created, not (yet) deleted.
        # Delete-then-recreate of an id is allowed here only back to back,
        # which is exactly what reconnect expansion emits; parse_log is
        # stricter and refuses recreation in raw input altogether.
        alive: dict[str, ObjectType] = {}
        dead: set[str] = set()
        for ev in self.events:
            oid = ev.object_id
            if ev.is_create():
                if oid in alive:
                    raise ValueError(f"duplicate create of object {oid} at seq {ev.seq}")
                alive[oid] = ev.object_type
                dead.discard(oid)
            else:
                if oid not in alive:
                    verb = "deleted" if oid in dead else "unknown"
                    raise ValueError(f"action on {verb} object {oid} at seq {ev.seq}")
                if alive[oid] is not ev.object_type:
                    raise ValueError(f"object {oid} changes type at seq {ev.seq}")
                if ev.is_delete():
                    del alive[oid]
                    dead.add(oid)
                elif ev.kind is EventKind.RECONNECT_EDGE:
                    pass  # delete + create of the same edge, stays alive

    def __len__(self) -> int:
        return len(self.events)

    def has_reconnects(self) -> bool:
        return any(ev.kind is EventKind.RECONNECT_EDGE for ev in self.events)


def _parse_row(row: list[str], line: int) -> ModelingEvent:
    if len(row) != 10:
        raise LogFormatError(f"expected 10 fields, got {len(row)}", line)
    raw_seq, raw_ts, raw_kind, oid, raw_otype, x, y, label, src, tgt = row
    try:
        seq = int(raw_seq)
    except ValueError:
        raise LogFormatError(f"bad seq {raw_seq!r}", line) from None
    try:
        ts = parse_timestamp(raw_ts)
    except ValueError as exc:
        raise LogFormatError(str(exc), line) from None
    try:
        kind = EventKind(raw_kind)
    except ValueError:
        raise LogFormatError(f"unknown event {raw_kind!r}", line) from None
    try:
        otype = ObjectType(raw_otype)
    except ValueError:
        raise LogFormatError(f"unknown object type {raw_otype!r}", line) from None
    if bool(x) != bool(y):
        raise LogFormatError("x and y must be given together", line)
    position = None
    if x:
        try:
            position = (int(x), int(y))
        except ValueError:
            raise LogFormatError(f"bad coordinates {x!r},{y!r}", line) from None
    try:
        return ModelingEvent(
            seq=seq,
            timestamp=ts,
            kind=kind,
            object_id=oid,
            object_type=otype,
            position=position,
            label=label or None,
            source_id=src or None,
            target_id=tgt or None,
        )
    except ValueError as exc:
        raise LogFormatError(str(exc), line) from None


def parse_log(data: bytes | str, session_id: str = "") -> EventLog:
    """Parse and validate an event-log CSV.

    Raises LogFormatError with a 1-based line number on any malformed row,
    unknown event name, seq or timestamp disorder, missing edge endpoints,
    action on a never-created or deleted object, or recreation of a
    previously deleted object id.
    """
    if isinstance(data, bytes):
        text = data.decode("utf-8")
    else:
        text = data
    reader = csv.reader(io.StringIO(text, newline=""))
    try:
        header = next(reader)
    except StopIteration:
        raise LogFormatError("empty input, expected header row", 1) from None
    if header != CSV_HEADER.split(","):
        raise LogFormatError(f"bad header {','.join(header)!r}", 1)

    events: list[ModelingEvent] = []
    prev: ModelingEvent | None = None
    alive: set[str] = set()
    dead: set[str] = set()
    for line, row in enumerate(reader, start=2):
        if not row:
            continue
        ev = _parse_row(row, line)
        if prev is not None and ev.seq <= prev.seq:
            raise LogFormatError(f"seq not strictly increasing ({prev.seq} then {ev.seq})", line)
        if prev is not None and ev.timestamp < prev.timestamp:
            raise LogFormatError("timestamp regression", line)
        oid = ev.object_id
        if ev.is_create():
            if oid in alive:
                raise LogFormatError(f"duplicate create of object {oid}", line)
            if oid in dead:
                raise LogFormatError(f"recreation of deleted object {oid}", line)
            alive.add(oid)
        else:
            if oid not in alive:
                raise LogFormatError(f"action on unknown object {oid}", line)
            if ev.is_delete():
                alive.discard(oid)
                dead.add(oid)
        prev = ev
        events.append(ev)
    try:
        return EventLog(session_id=session_id, events=tuple(events))
    except ValueError as exc:  # object-type flips and similar cross-row issues
        raise LogFormatError(str(exc)) from None


def serialize_log(log: EventLog) -> str:
    """Render a log back to its CSV form. parse_log inverts this exactly."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_HEADER.split(","))
    for ev in log.events:
        x, y = ("", "") if ev.position is None else (str(ev.position[0]), str(ev.position[1]))
        writer.writerow(
            [
                str(ev.seq),
                format_timestamp(ev.timestamp),
                ev.kind.value,
                ev.object_id,
                ev.object_type.value,
                x,
                y,
                ev.label or "",
                ev.source_id or "",
                ev.target_id or "",
            ]
        )
    return out.getvalue()


def expand_reconnect(log: EventLog) -> EventLog:
    """Replace each RECONNECT_EDGE by DELETE_EDGE + CREATE_EDGE on the same id.

    Both synthetic events keep the reconnect's timestamp; the create carries
    the reconnect's endpoints. Seq numbers are reassigned consecutively so
    relative order is preserved. Applying this twice is a no-op.
    """
    if not log.has_reconnects():
        return log
    events: list[ModelingEvent] = []
    seq = 0
    for ev in log.events:
        if ev.kind is EventKind.RECONNECT_EDGE:
            seq += 1
            events.append(
                ModelingEvent(
                    seq=seq,
                    timestamp=ev.timestamp,
                    kind=EventKind.DELETE_EDGE,
                    object_id=ev.object_id,
                    object_type=ObjectType.EDGE,
                )
            )
            seq += 1
            events.append(
                ModelingEvent(
                    seq=seq,
                    timestamp=ev.timestamp,
                    kind=EventKind.CREATE_EDGE,
                    object_id=ev.object_id,
                    object_type=ObjectType.EDGE,
                    position=ev.position,
                    label=ev.label,
                    source_id=ev.source_id,
                    target_id=ev.target_id,
                )
            )
        else:
            seq += 1
            events.append(replace(ev, seq=seq) if ev.seq != seq else ev)
    return EventLog(session_id=log.session_id, events=tuple(events))
