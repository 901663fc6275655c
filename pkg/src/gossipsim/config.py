"""Protocol and score-function configuration.

A ``Twp`` maps each topic to its ``TopicParams`` and carries one shared
``GlobalParams``.  Configs are immutable after construction and safe to share
across threads.  The JSON document format is::

    {
      "global": { "w5": 1, "topicCap": "32.72", ... },
      "topics": { "BLOCKS": { "topicWeight": "0.8", ... }, ... }
    }

Rationals serialize as exact decimal strings or "p/q" strings; both forms
(and plain JSON numbers) are accepted on input.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, fields, replace
from fractions import Fraction

from .rational import RationalFormatError, format_rational, parse_rational

__all__ = [
    "ConfigError",
    "Finding",
    "GlobalParams",
    "TopicParams",
    "Twp",
    "parse_config",
    "parse_config_dict",
    "serialize_config",
    "validate_config",
]


class ConfigError(ValueError):
    """Malformed or type-invalid configuration input."""


@dataclass(frozen=True)
class TopicParams:
    """Per-topic weights, caps, decays, and mesh degree targets."""

    topic_weight: Fraction = Fraction(1)
    w1: Fraction = Fraction(1)          # time in mesh
    w2: Fraction = Fraction(1)          # first message deliveries
    w3: Fraction = Fraction(-1)         # mesh message delivery deficit (squared)
    w3b: Fraction = Fraction(-1)        # mesh failure penalty
    w4: Fraction = Fraction(-1)         # invalid message deliveries
    time_in_mesh_quantum: int = 1       # heartbeat ticks per quantum
    time_in_mesh_cap: Fraction = Fraction(3600)
    first_message_deliveries_cap: Fraction = Fraction(100)
    first_message_deliveries_decay: Fraction = Fraction(9, 10)
    mesh_message_deliveries_decay: Fraction = Fraction(9, 10)
    mesh_failure_penalty_decay: Fraction = Fraction(9, 10)
    invalid_message_deliveries_decay: Fraction = Fraction(9, 10)
    mesh_message_deliveries_threshold: Fraction = Fraction(1)
    mesh_message_deliveries_cap: Fraction = Fraction(100)
    activation_window: int = 1          # quanta of mesh time before the deficit arms
    mesh_message_deliveries_window: int = 2  # ticks a near-first duplicate still counts
    d: int = 6
    d_low: int = 4
    d_hi: int = 12
    d_lazy: int = 6
    square_p4: bool = False             # off: invalid deliveries enter the score linearly


@dataclass(frozen=True)
class GlobalParams:
    """Topic-independent weights, caps, thresholds, and protocol timers."""

    w5: Fraction = Fraction(1)          # application-specific score
    w6: Fraction = Fraction(-1)         # IP colocation (squared excess)
    w7: Fraction = Fraction(-1)         # behavioural penalty (squared excess)
    topic_cap: Fraction = Fraction(0)   # 0 disables the cap
    ip_colocation_threshold: int = 1
    behaviour_penalty_threshold: Fraction = Fraction(0)
    behaviour_penalty_decay: Fraction = Fraction(9, 10)
    decay_to_zero: Fraction = Fraction(1, 100)
    decay_interval_ticks: int = 1
    prune_backoff_ticks: int = 60
    unsubscribe_backoff_ticks: int = 10
    flood_publish: bool = True
    gossip_factor: Fraction = Fraction(1, 4)
    heartbeat_interval_ticks: int = 1
    fanout_ttl_ticks: int = 60
    seen_ttl_ticks: int = 120
    retain_score_ticks: int = 3600
    mcache_len: int = 5
    mcache_gossip: int = 3
    dscore: int = 4
    dout: int = 2
    gossip_threshold: Fraction = Fraction(-10)
    publish_threshold: Fraction = Fraction(-50)
    graylist_threshold: Fraction = Fraction(-100)
    opportunistic_graft_threshold: Fraction = Fraction(1)
    app_specific_enabled: bool = True   # false models apps that disable the component


class Twp:
    """Topics-with-parameters: topic -> TopicParams plus one GlobalParams."""

    def __init__(self, topics: dict[str, TopicParams], global_params: GlobalParams):
        if not topics:
            raise ConfigError("no topics defined")
        self._topics = dict(sorted(topics.items()))
        self._global = global_params

    @property
    def global_params(self) -> GlobalParams:
        return self._global

    def topics(self) -> tuple[str, ...]:
        return tuple(self._topics)

    def __contains__(self, topic: str) -> bool:
        return topic in self._topics

    def __getitem__(self, topic: str) -> TopicParams:
        try:
            return self._topics[topic]
        except KeyError:
            raise KeyError(f"topic {topic!r} is not configured") from None

    def items(self) -> tuple[tuple[str, TopicParams], ...]:
        return tuple(self._topics.items())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Twp):
            return NotImplemented
        return self._topics == other._topics and self._global == other._global

    def __repr__(self) -> str:
        return f"Twp(topics={list(self._topics)}, global={self._global!r})"

    def with_topics(self, topics: dict[str, TopicParams]) -> "Twp":
        return Twp(topics, self._global)

    def with_global(self, **changes: object) -> "Twp":
        return Twp(dict(self._topics), replace(self._global, **changes))


# JSON field name (camelCase) -> dataclass attribute, with a coarse type tag.
_TOPIC_FIELDS: dict[str, tuple[str, str]] = {
    "topicWeight": ("topic_weight", "rational"),
    "w1": ("w1", "rational"),
    "w2": ("w2", "rational"),
    "w3": ("w3", "rational"),
    "w3b": ("w3b", "rational"),
    "w4": ("w4", "rational"),
    "timeInMeshQuantum": ("time_in_mesh_quantum", "int"),
    "timeInMeshCap": ("time_in_mesh_cap", "rational"),
    "firstMessageDeliveriesCap": ("first_message_deliveries_cap", "rational"),
    "firstMessageDeliveriesDecay": ("first_message_deliveries_decay", "rational"),
    "meshMessageDeliveriesDecay": ("mesh_message_deliveries_decay", "rational"),
    "meshFailurePenaltyDecay": ("mesh_failure_penalty_decay", "rational"),
    "invalidMessageDeliveriesDecay": ("invalid_message_deliveries_decay", "rational"),
    "meshMessageDeliveriesThreshold": ("mesh_message_deliveries_threshold", "rational"),
    "meshMessageDeliveriesCap": ("mesh_message_deliveries_cap", "rational"),
    "activationWindow": ("activation_window", "int"),
    "meshMessageDeliveriesWindow": ("mesh_message_deliveries_window", "int"),
    "D": ("d", "int"),
    "Dlow": ("d_low", "int"),
    "Dhi": ("d_hi", "int"),
    "Dlazy": ("d_lazy", "int"),
    "squareP4": ("square_p4", "bool"),
}

_GLOBAL_FIELDS: dict[str, tuple[str, str]] = {
    "w5": ("w5", "rational"),
    "w6": ("w6", "rational"),
    "w7": ("w7", "rational"),
    "topicCap": ("topic_cap", "rational"),
    "ipColocationThreshold": ("ip_colocation_threshold", "int"),
    "behaviourPenaltyThreshold": ("behaviour_penalty_threshold", "rational"),
    "behaviourPenaltyDecay": ("behaviour_penalty_decay", "rational"),
    "decayToZero": ("decay_to_zero", "rational"),
    "decayIntervalTicks": ("decay_interval_ticks", "int"),
    "pruneBackoffTicks": ("prune_backoff_ticks", "int"),
    "unsubscribeBackoffTicks": ("unsubscribe_backoff_ticks", "int"),
    "floodPublish": ("flood_publish", "bool"),
    "gossipFactor": ("gossip_factor", "rational"),
    "heartbeatIntervalTicks": ("heartbeat_interval_ticks", "int"),
    "fanoutTTLTicks": ("fanout_ttl_ticks", "int"),
    "seenTTLTicks": ("seen_ttl_ticks", "int"),
    "retainScoreTicks": ("retain_score_ticks", "int"),
    "mcacheLen": ("mcache_len", "int"),
    "mcacheGossip": ("mcache_gossip", "int"),
    "dscore": ("dscore", "int"),
    "dout": ("dout", "int"),
    "gossipThreshold": ("gossip_threshold", "rational"),
    "publishThreshold": ("publish_threshold", "rational"),
    "graylistThreshold": ("graylist_threshold", "rational"),
    "opportunisticGraftThreshold": ("opportunistic_graft_threshold", "rational"),
    "appSpecificEnabled": ("app_specific_enabled", "bool"),
}


def _coerce(kind: str, raw: object, where: str) -> object:
    if kind == "rational":
        try:
            return parse_rational(raw, where)
        except RationalFormatError as exc:
            raise ConfigError(str(exc)) from None
    if kind == "int":
        if isinstance(raw, bool) or not isinstance(raw, int):
            if isinstance(raw, Fraction) and raw.denominator == 1:
                return int(raw)
            raise ConfigError(f"{where}: expected an integer, got {raw!r}")
        return raw
    if kind == "bool":
        if not isinstance(raw, bool):
            raise ConfigError(f"{where}: expected a boolean, got {raw!r}")
        return raw
    raise AssertionError(kind)


def _parse_section(raw: object, field_map: dict[str, tuple[str, str]], where: str) -> dict:
    if not isinstance(raw, dict):
        raise ConfigError(f"{where}: expected an object")
    out: dict[str, object] = {}
    for key, value in raw.items():
        if key not in field_map:
            raise ConfigError(f"{where}.{key}: unknown field")
        attr, kind = field_map[key]
        out[attr] = _coerce(kind, value, f"{where}.{key}")
    return out


def parse_config_dict(doc: dict) -> Twp:
    """Build a Twp from an already-decoded JSON document."""
    if not isinstance(doc, dict):
        raise ConfigError("top level: expected an object")
    unknown = set(doc) - {"global", "topics"}
    if unknown:
        raise ConfigError(f"top level: unknown keys {sorted(unknown)}")
    global_params = GlobalParams(**_parse_section(doc.get("global", {}), _GLOBAL_FIELDS, "global"))
    topics_raw = doc.get("topics", {})
    if not isinstance(topics_raw, dict):
        raise ConfigError("topics: expected an object")
    if not topics_raw:
        raise ConfigError("no topics defined")
    topics = {
        name: TopicParams(**_parse_section(body, _TOPIC_FIELDS, f"topics.{name}"))
        for name, body in topics_raw.items()
    }
    twp = Twp(topics, global_params)
    errors = [f for f in validate_config(twp, strict=False) if f.level == "error"]
    if errors:
        first = errors[0]
        raise ConfigError(f"{first.path}: {first.message}")
    return twp


def parse_config(text: str) -> Twp:
    """Parse a JSON config document into a validated Twp."""
    try:
        doc = json.loads(text, parse_float=Fraction)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return parse_config_dict(doc)


def _dump_section(obj: object, field_map: dict[str, tuple[str, str]]) -> dict:
    out = {}
    for key, (attr, kind) in field_map.items():
        value = getattr(obj, attr)
        if kind == "rational":
            out[key] = format_rational(value)
        else:
            out[key] = value
    return out


def serialize_config(twp: Twp) -> str:
    """Exact JSON form; parse(serialize(twp)) == twp."""
    doc = {
        "global": _dump_section(twp.global_params, _GLOBAL_FIELDS),
        "topics": {name: _dump_section(tp, _TOPIC_FIELDS) for name, tp in twp.items()},
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


@dataclass(frozen=True)
class Finding:
    level: str  # "error" | "warning"
    path: str
    message: str

    def as_dict(self) -> dict:
        return {"level": self.level, "path": self.path, "message": self.message}


def _type_findings(twp: Twp) -> list[Finding]:
    """Violations of the field domains; errors regardless of mode."""
    out: list[Finding] = []

    def err(path: str, message: str) -> None:
        out.append(Finding("error", path, message))

    gp = twp.global_params
    if gp.w5 <= 0:
        err("global.w5", "w5 must be positive")
    for name in ("w6", "w7"):
        if getattr(gp, name) > 0:
            err(f"global.{name}", f"{name} must be non-positive")
    if gp.topic_cap < 0:
        err("global.topicCap", "topicCap must be non-negative")
    if gp.ip_colocation_threshold < 1:
        err("global.ipColocationThreshold", "ipColocationThreshold must be at least 1")
    if gp.behaviour_penalty_threshold < 0:
        err("global.behaviourPenaltyThreshold", "behaviourPenaltyThreshold must be non-negative")
    if not 0 < gp.behaviour_penalty_decay <= 1:
        err("global.behaviourPenaltyDecay", "decay not in (0,1]")
    if gp.decay_to_zero <= 0:
        err("global.decayToZero", "decayToZero must be positive")
    if gp.decay_interval_ticks < 1:
        err("global.decayIntervalTicks", "decayIntervalTicks must be positive")
    if gp.heartbeat_interval_ticks < 1:
        err("global.heartbeatIntervalTicks", "heartbeatIntervalTicks must be positive")
    for name, label in (
        ("prune_backoff_ticks", "pruneBackoffTicks"),
        ("unsubscribe_backoff_ticks", "unsubscribeBackoffTicks"),
        ("fanout_ttl_ticks", "fanoutTTLTicks"),
        ("seen_ttl_ticks", "seenTTLTicks"),
        ("retain_score_ticks", "retainScoreTicks"),
    ):
        if getattr(gp, name) < 0:
            err(f"global.{label}", f"{label} must be non-negative")
    if not 0 <= gp.gossip_factor <= 1:
        err("global.gossipFactor", "gossipFactor must be in [0,1]")
    if gp.mcache_len < 1:
        err("global.mcacheLen", "mcacheLen must be positive")
    if gp.mcache_gossip < 1:
        err("global.mcacheGossip", "mcacheGossip must be positive")
    if gp.mcache_gossip > gp.mcache_len:
        err("global.mcacheGossip", "mcacheGossip must not exceed mcacheLen")
    if gp.dscore < 0 or gp.dout < 0:
        err("global.dscore", "dscore and dout must be non-negative")

    for topic, tp in twp.items():
        where = f"topics.{topic}"
        if tp.topic_weight <= 0:
            err(f"{where}.topicWeight", "topicWeight must be positive")
        if tp.w1 <= 0:
            err(f"{where}.w1", "w1 must be positive")
        if tp.w2 <= 0:
            err(f"{where}.w2", "w2 must be positive")
        for name in ("w3", "w3b", "w4"):
            if getattr(tp, name) > 0:
                err(f"{where}.{name}", f"{name} must be non-positive")
        if tp.time_in_mesh_quantum < 1:
            err(f"{where}.timeInMeshQuantum", "timeInMeshQuantum must be positive")
        if tp.time_in_mesh_cap <= 0:
            err(f"{where}.timeInMeshCap", "timeInMeshCap must be positive")
        if tp.first_message_deliveries_cap <= 0:
            err(f"{where}.firstMessageDeliveriesCap", "firstMessageDeliveriesCap must be positive")
        for name, label in (
            ("first_message_deliveries_decay", "firstMessageDeliveriesDecay"),
            ("mesh_message_deliveries_decay", "meshMessageDeliveriesDecay"),
            ("mesh_failure_penalty_decay", "meshFailurePenaltyDecay"),
            ("invalid_message_deliveries_decay", "invalidMessageDeliveriesDecay"),
        ):
            if not 0 < getattr(tp, name) <= 1:
                err(f"{where}.{label}", "decay not in (0,1]")
        if tp.mesh_message_deliveries_threshold < 0:
            err(f"{where}.meshMessageDeliveriesThreshold", "threshold must be non-negative")
        if tp.mesh_message_deliveries_cap < 0:
            err(f"{where}.meshMessageDeliveriesCap", "cap must be non-negative")
        if tp.activation_window < 0:
            err(f"{where}.activationWindow", "activationWindow must be non-negative")
        if tp.mesh_message_deliveries_window < 0:
            err(f"{where}.meshMessageDeliveriesWindow", "window must be non-negative")
        if not (0 <= tp.d_low <= tp.d <= tp.d_hi):
            err(f"{where}.D", "Dlow <= D <= Dhi must hold")
        if tp.d_lazy < 0:
            err(f"{where}.Dlazy", "Dlazy must be non-negative")
    return out


def _guidance_findings(twp: Twp, strict: bool) -> list[Finding]:
    """Spec-guidance checks; errors in strict mode, warnings otherwise."""
    level = "error" if strict else "warning"
    out: list[Finding] = []

    def note(path: str, message: str) -> None:
        out.append(Finding(level, path, message))

    gp = twp.global_params
    for name in ("w6", "w7"):
        if getattr(gp, name) == 0:
            note(f"global.{name}", f"zero-valued weight: {name} should be negative")
    if gp.gossip_threshold >= 0:
        note("global.gossipThreshold", "gossipThreshold should be negative")
    if gp.publish_threshold > gp.gossip_threshold:
        note("global.publishThreshold", "publishThreshold should not exceed gossipThreshold")
    if gp.graylist_threshold >= gp.publish_threshold:
        note("global.graylistThreshold", "graylistThreshold should be below publishThreshold")
    if gp.opportunistic_graft_threshold < 0:
        note("global.opportunisticGraftThreshold", "opportunisticGraftThreshold should be non-negative")
    if gp.behaviour_penalty_decay == 1:
        note("global.behaviourPenaltyDecay", "decay of exactly 1 never forgets")

    for topic, tp in twp.items():
        where = f"topics.{topic}"
        for name in ("w3", "w3b", "w4"):
            if getattr(tp, name) == 0:
                note(f"{where}.{name}", f"zero-valued weight: {name} should be negative")
        if tp.mesh_message_deliveries_threshold == 0:
            note(
                f"{where}.meshMessageDeliveriesThreshold",
                "zero-valued threshold: delivery deficits can never arm",
            )
        if tp.first_message_deliveries_cap < tp.mesh_message_deliveries_threshold:
            note(
                f"{where}.firstMessageDeliveriesCap",
                "firstMessageDeliveriesCap should be at least meshMessageDeliveriesThreshold",
            )
        if tp.mesh_message_deliveries_cap < tp.mesh_message_deliveries_threshold:
            note(
                f"{where}.meshMessageDeliveriesCap",
                "meshMessageDeliveriesCap should be at least meshMessageDeliveriesThreshold",
            )
        for name, label in (
            ("first_message_deliveries_decay", "firstMessageDeliveriesDecay"),
            ("mesh_message_deliveries_decay", "meshMessageDeliveriesDecay"),
            ("mesh_failure_penalty_decay", "meshFailurePenaltyDecay"),
            ("invalid_message_deliveries_decay", "invalidMessageDeliveriesDecay"),
        ):
            if getattr(tp, name) == 1:
                note(f"{where}.{label}", "decay of exactly 1 never forgets")
    return out


def validate_config(twp: Twp, strict: bool) -> list[Finding]:
    """One finding per violated constraint; strict mode upgrades guidance to errors."""
    return _type_findings(twp) + _guidance_findings(twp, strict)


def config_fingerprint(twp: Twp) -> str:
    """Stable digest identifying a configuration, embedded in every report."""
    import hashlib

    return hashlib.sha256(serialize_config(twp).encode()).hexdigest()[:16]


def _unused_fields_guard() -> None:
    # Keeps dataclass field order in sync with the JSON maps; fails loudly in tests.
    topic_attrs = {f.name for f in fields(TopicParams)}
    assert {a for a, _ in _TOPIC_FIELDS.values()} == topic_attrs
    global_attrs = {f.name for f in fields(GlobalParams)}
    assert {a for a, _ in _GLOBAL_FIELDS.values()} == global_attrs


_unused_fields_guard()
