#!/usr/bin/env python3
"""Regenerates data/policies/corpus.json.

Usage: tools/make_corpus.py [out-path]
"""
import json
import sys
from pathlib import Path

AMF, SMF, UPF, GNB, TN, SLICE = (
    "AMFFunction", "SMFFunction", "UPFFunction", "GnbFunction", "TransportNode", "NetworkSlice")
MF, TOP = "ManagedFunction", "Top"
SHORT = {AMF: "AMF", SMF: "SMF", UPF: "UPF", GNB: "Gnb", TN: "Transport", SLICE: "Slice"}

shapes = []


def shape(sid, target, kind, params, message):
    shapes.append({"id": sid, "targetClass": target, "kind": kind,
                   "params": params, "message": message})


# Topological: direct adjacency bans, mediation requirements, interface bans.
shape("AMFUPFShape", AMF, "ForbiddenAdjacency", {"iface": "*", "peerClass": UPF},
      "AMF cannot connect directly to UPF")

for src, peer, via in [(AMF, UPF, SMF), (GNB, SMF, AMF), (UPF, AMF, GNB),
                       (TN, AMF, GNB), (TN, SMF, AMF), (UPF, SMF, AMF)]:
    shape(f"{SHORT[src]}To{SHORT[peer]}Via{SHORT[via]}Shape", src, "RequiredMediation",
          {"peerClass": peer, "viaClass": via, "maxDepth": 4},
          f"{SHORT[src]} may reach {SHORT[peer]} only through {SHORT[via]}")

forbidden_ifaces = {
    AMF: ["N3", "N4", "N6", "transportLink", "measurementPoint", "s-nssai-config"],
    SMF: ["N2", "N3", "N6", "transportLink", "measurementPoint"],
    UPF: ["N2", "N11", "measurementPoint"],
    GNB: ["N4", "N6", "N11"],
    TN: ["N2", "N3", "N4", "N11", "s-nssai-config"],
}
for cls, ifaces in forbidden_ifaces.items():
    for iface in ifaces:
        name = "".join(w[0].upper() + w[1:] for w in iface.split("-"))
        shape(f"{SHORT[cls]}No{name}Shape", cls, "ForbiddenAdjacency",
              {"iface": iface, "peerClass": TOP},
              f"{SHORT[cls]} must not terminate interface {iface}")

for a, b in [(UPF, AMF), (GNB, SMF), (SMF, GNB), (AMF, TN), (TN, AMF), (SMF, TN),
             (TN, SMF), (AMF, AMF), (SMF, SMF), (UPF, UPF), (GNB, GNB)]:
    shape(f"{SHORT[a]}{SHORT[b]}AdjacencyShape", a, "ForbiddenAdjacency",
          {"iface": "*", "peerClass": b},
          f"{SHORT[a]} cannot connect directly to {SHORT[b]}")

for iface in ["N2", "N3", "N4", "N6", "N11", "transportLink", "measurementPoint"]:
    name = iface[0].upper() + iface[1:]
    shape(f"SliceNo{name}Shape", SLICE, "ForbiddenAdjacency",
          {"iface": iface, "peerClass": TOP},
          f"Slices attach only through s-nssai-config, not {iface}")

# Resource bounds.
for cls in [AMF, SMF, UPF, GNB, TN]:
    s = SHORT[cls]
    shape(f"{s}LoadShape", cls, "AttributeRange", {"attribute": "loadPercent", "maxInclusive": 85},
          f"{s} load above 85%")
    shape(f"{s}LatencyShape", cls, "AttributeRange", {"attribute": "latencyMs", "maxInclusive": 50},
          f"{s} latency above 50 ms")
    shape(f"{s}CapacityShape", cls, "AttributeRange",
          {"attribute": "plannedCapacity", "maxInclusive": 200},
          f"{s} planned capacity above 200")
shape("SliceCapacityShape", SLICE, "AttributeRange",
      {"attribute": "allocatedBandwidth", "maxInclusive": 100},
      "Slice bandwidth cannot exceed 100 Mbps")
shape("SliceBandwidthFloorShape", SLICE, "AttributeRange",
      {"attribute": "allocatedBandwidth", "minInclusive": 0}, "Slice bandwidth must be non-negative")
shape("SliceLatencyShape", SLICE, "AttributeRange", {"attribute": "latencyMs", "maxInclusive": 100},
      "Slice latency above 100 ms")
shape("SliceLatencyFloorShape", SLICE, "AttributeRange",
      {"attribute": "latencyMs", "minInclusive": 0}, "Slice latency must be non-negative")
shape("SlicePlannedCapacityShape", SLICE, "AttributeRange",
      {"attribute": "plannedCapacity", "minInclusive": 0, "maxInclusive": 200},
      "Slice planned capacity outside [0, 200]")
for attr in ["loadPercent", "latencyMs", "plannedCapacity"]:
    shape(f"Function{attr[0].upper() + attr[1:]}FloorShape", MF, "AttributeRange",
          {"attribute": attr, "minInclusive": 0}, f"Function {attr} must be non-negative")

# State.
AS = ["ACTIVE", "STANDBY"]
shape("ActiveNodeShape", MF, "AttributeEnum", {"attribute": "status", "allowed": AS},
      "Invalid node status")
for cls in [AMF, SMF, UPF, GNB, TN, SLICE]:
    shape(f"{SHORT[cls]}StatusShape", cls, "AttributeEnum", {"attribute": "status", "allowed": AS},
          f"{SHORT[cls]} must be ACTIVE or STANDBY")
for cls in [AMF, SMF, UPF, GNB, TN, SLICE]:
    shape(f"{SHORT[cls]}NotFailedShape", cls, "AttributeEnum",
          {"attribute": "status", "allowed": AS + ["DECOMMISSIONED"]},
          f"{SHORT[cls]} reported FAILED")
for cls in [AMF, SMF]:
    shape(f"{SHORT[cls]}ActiveShape", cls, "AttributeEnum",
          {"attribute": "status", "allowed": ["ACTIVE"]},
          f"{SHORT[cls]} has no standby role and must be ACTIVE")
shape("InventoryStatusShape", TOP, "AttributeEnum", {"attribute": "status", "allowed": AS},
      "Inventory entity in a non-serving state")
shape("FunctionLifecycleShape", MF, "AttributeEnum",
      {"attribute": "status", "allowed": AS + ["DECOMMISSIONED"]},
      "Function lifecycle state not allowed")
shape("SliceActiveShape", SLICE, "AttributeEnum", {"attribute": "status", "allowed": ["ACTIVE"]},
      "Slice must be ACTIVE")

# Temporal and delta guardrails.
shape("FreshnessShape", MF, "Freshness", {"maxAgeSeconds": 15},
      "Governance Failure: Telemetry too stale (>15s)")
shape("CapacityShockShape", SLICE, "DeltaBound",
      {"attribute": "plannedCapacity", "minPercent": 80, "maxPercent": 120},
      "Adversarial Protection: Capacity change exceeds ±20%")
shape("FunctionCapacityShockShape", MF, "DeltaBound",
      {"attribute": "plannedCapacity", "minPercent": 80, "maxPercent": 120},
      "Adversarial Protection: Function capacity change exceeds ±20%")
shape("SliceBandwidthShockShape", SLICE, "DeltaBound",
      {"attribute": "allocatedBandwidth", "minPercent": 80, "maxPercent": 120},
      "Adversarial Protection: Bandwidth change exceeds ±20%")

ids = [s["id"] for s in shapes]
assert len(ids) == len(set(ids)), "duplicate shape ids"

out = Path(sys.argv[1]) if len(sys.argv) > 1 else \
    Path(__file__).resolve().parent.parent / "data" / "policies" / "corpus.json"
out.write_text(json.dumps({"shapes": shapes}, indent=2, ensure_ascii=False) + "\n")
print(f"{len(shapes)} shapes -> {out}")
