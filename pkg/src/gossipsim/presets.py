"""Built-in configurations: eth, filecoin, pathological, good.

The weights, topic caps, and mesh degrees come from the published FileCoin
and Eth2.0 GossipSub configurations (and the deliberately bad "pathological"
one).  Constants those sources leave open (caps, decays, thresholds, quanta,
activation windows) are fixed here so that the documented regression
snapshots are reachable; see the comments on the Eth topics.
"""

from __future__ import annotations

from dataclasses import replace
from fractions import Fraction as F

from .config import GlobalParams, TopicParams, Twp

__all__ = ["PRESET_NAMES", "preset", "eth_twp", "filecoin_twp", "pathological_twp", "good_twp"]


def _eth_global(topic_cap: F) -> GlobalParams:
    return GlobalParams(
        w5=F(1),
        w6=F("-35.11"),
        w7=F("-15.92"),
        topic_cap=topic_cap,
        ip_colocation_threshold=3,
        behaviour_penalty_threshold=F(6),
        behaviour_penalty_decay=F("0.9"),
        decay_to_zero=F("0.01"),
        decay_interval_ticks=1,
        prune_backoff_ticks=60,
        unsubscribe_backoff_ticks=10,
        flood_publish=True,
        gossip_factor=F("0.25"),
        heartbeat_interval_ticks=1,
        fanout_ttl_ticks=60,
        seen_ttl_ticks=120,
        retain_score_ticks=3600,
        mcache_len=5,
        mcache_gossip=3,
        dscore=4,
        dout=2,
        gossip_threshold=F(-4000),
        publish_threshold=F(-8000),
        graylist_threshold=F(-16000),
        opportunistic_graft_threshold=F(5),
    )


# First-delivery caps for BLOCKS (23) and the subnets (24) are pinned by the
# published indicator snapshots (194 -> 23, 188 -> 24); the AGG cap 178.125
# makes its snapshot row score exactly 13.83.  Thresholds 10/10/2 and quanta
# 1/1/10 reproduce the deficit and time-in-mesh columns of the same snapshots.
_ETH_BLOCKS = TopicParams(
    topic_weight=F("0.8"),
    w1=F("0.0324"),
    w2=F(1),
    w3=F("-0.717"),
    w3b=F("-0.717"),
    w4=F("-140.45"),
    time_in_mesh_quantum=1,
    time_in_mesh_cap=F(300),
    first_message_deliveries_cap=F(23),
    first_message_deliveries_decay=F("0.9"),
    mesh_message_deliveries_decay=F("0.9"),
    mesh_failure_penalty_decay=F("0.9"),
    invalid_message_deliveries_decay=F("0.9"),
    mesh_message_deliveries_threshold=F(10),
    mesh_message_deliveries_cap=F(300),
    activation_window=1,
    mesh_message_deliveries_window=2,
    d=8,
    d_low=6,
    d_hi=12,
    d_lazy=8,
)

_ETH_AGG = replace(
    _ETH_BLOCKS,
    topic_weight=F("0.5"),
    w2=F("0.128"),
    w3=F("-0.064"),
    w3b=F("-0.064"),
    w4=F("-140.45"),
    first_message_deliveries_cap=F("178.125"),
    first_message_deliveries_decay=F("0.97"),
)

# Subnet mesh-delivery decay 0.5 keeps a throttled topic (one delivery per
# heartbeat) pinned below the threshold of 2, so throttling stays punishable.
_ETH_SUB = replace(
    _ETH_BLOCKS,
    topic_weight=F("0.33"),
    w2=F("0.95"),
    w3=F("-37.55"),
    w3b=F("-37.55"),
    w4=F(-4544),
    time_in_mesh_quantum=10,
    first_message_deliveries_cap=F(24),
    mesh_message_deliveries_decay=F("0.5"),
    mesh_message_deliveries_threshold=F(2),
)


def eth_twp(subnet_count: int = 3, topic_cap: F = F("32.72")) -> Twp:
    """Eth2.0 configuration: BLOCKS, AGG, and `subnet_count` SUB topics."""
    if subnet_count < 1:
        raise ValueError("subnet_count must be at least 1")
    topics: dict[str, TopicParams] = {"BLOCKS": _ETH_BLOCKS, "AGG": _ETH_AGG}
    for k in range(1, subnet_count + 1):
        topics[f"SUB{k}"] = _ETH_SUB
    return Twp(topics, _eth_global(topic_cap))


def filecoin_twp() -> Twp:
    """FileCoin configuration: deficit weights and the topic cap are zeroed
    and the application-specific component is disabled."""
    messages = TopicParams(
        topic_weight=F(1),
        w1=F("2.78"),
        w2=F("0.5"),
        w3=F(0),
        w3b=F(0),
        w4=F(-1000),
        time_in_mesh_quantum=1,
        time_in_mesh_cap=F(60),
        first_message_deliveries_cap=F(100),
        first_message_deliveries_decay=F("0.9"),
        mesh_message_deliveries_decay=F("0.9"),
        mesh_failure_penalty_decay=F("0.9"),
        invalid_message_deliveries_decay=F("0.9"),
        mesh_message_deliveries_threshold=F(0),
        mesh_message_deliveries_cap=F(100),
        activation_window=1,
        mesh_message_deliveries_window=2,
        d=8,
        d_low=6,
        d_hi=12,
        d_lazy=8,
    )
    blocks = replace(messages, w1=F("0.027"), w2=F(5))
    global_params = GlobalParams(
        w5=F(1),
        w6=F(-100),
        w7=F(-10),
        topic_cap=F(0),
        ip_colocation_threshold=1,
        behaviour_penalty_threshold=F(0),
        behaviour_penalty_decay=F("0.9"),
        gossip_threshold=F(-10),
        publish_threshold=F(-50),
        graylist_threshold=F(-100),
        opportunistic_graft_threshold=F(1),
        app_specific_enabled=False,
    )
    return Twp({"MESSAGES": messages, "BLOCKS": blocks}, global_params)


def pathological_twp() -> Twp:
    """Five identically configured topics with huge topic weight, a tiny
    topic cap, and near-vanishing penalties."""
    tp = TopicParams(
        topic_weight=F(40),
        w1=F(10),
        w2=F(10),
        w3=F(-1),
        w3b=F(-1),
        w4=F(-1),
        time_in_mesh_quantum=1,
        time_in_mesh_cap=F(10),
        first_message_deliveries_cap=F(50),
        mesh_message_deliveries_threshold=F(5),
        mesh_message_deliveries_cap=F(50),
        activation_window=1,
        d=5,
        d_low=3,
        d_hi=8,
        d_lazy=5,
    )
    global_params = GlobalParams(
        w5=F(10),
        w6=F(-1),
        w7=F(-1),
        topic_cap=F(5),
        ip_colocation_threshold=1,
        behaviour_penalty_threshold=F(0),
        gossip_threshold=F(-1),
        publish_threshold=F(-2),
        graylist_threshold=F(-3),
        opportunistic_graft_threshold=F(0),
    )
    return Twp({f"TOP{k}": tp for k in range(1, 6)}, global_params)


def good_twp() -> Twp:
    """A configuration that passes strict validation and keeps every
    property: heavy penalties, and a topic cap no reachable sum can hit."""
    tp = TopicParams(
        topic_weight=F("0.5"),
        w1=F("0.027"),
        w2=F(5),
        w3=F(-1000),
        w3b=F(-1000),
        w4=F(-1000),
        time_in_mesh_quantum=1,
        time_in_mesh_cap=F(60),
        first_message_deliveries_cap=F(8),
        mesh_message_deliveries_threshold=F(4),
        mesh_message_deliveries_cap=F(10),
        activation_window=1,
        d=8,
        d_low=6,
        d_hi=12,
        d_lazy=8,
    )
    global_params = GlobalParams(
        w5=F(1),
        w6=F(-100),
        w7=F(-10),
        topic_cap=F(100),
        ip_colocation_threshold=1,
        behaviour_penalty_threshold=F(0),
        gossip_threshold=F(-10),
        publish_threshold=F(-50),
        graylist_threshold=F(-100),
        opportunistic_graft_threshold=F(1),
    )
    return Twp({"GOOD1": tp, "GOOD2": tp}, global_params)


PRESET_NAMES = ("eth", "filecoin", "pathological", "good", "eth-cap37")


def preset(name: str) -> Twp:
    """Look up a built-in configuration by name."""
    if name == "eth":
        return eth_twp()
    if name == "eth-cap37":
        # Sensitivity variant: an alternative published figure for the cap.
        return eth_twp(topic_cap=F("37.72"))
    if name == "filecoin":
        return filecoin_twp()
    if name == "pathological":
        return pathological_twp()
    if name == "good":
        return good_twp()
    raise KeyError(f"unknown preset {name!r} (choose from {', '.join(PRESET_NAMES)})")
