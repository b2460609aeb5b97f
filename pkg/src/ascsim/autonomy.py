"""Autonomy assessment: the intelligence/automation plane, a six-characteristic
readiness checklist, and a seven-level capability rubric.

All functions are pure and total over valid inputs. Thresholds are
configuration; nothing here hard-codes a maturity boundary.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping

from .events import Event, EventKind


class InvalidProfile(Exception):
    pass


class EmptyLog(Exception):
    pass


@dataclass(frozen=True)
class AutonomyPoint:
    intelligence: float
    automation: float

    def __post_init__(self) -> None:
        for label, value in (("intelligence", self.intelligence), ("automation", self.automation)):
            if not (0.0 <= value <= 1.0):
                raise ValueError(f"{label} must be in [0,1], got {value}")


@dataclass(frozen=True)
class ManifoldConfig:
    tau_i: float = 0.5
    tau_a: float = 0.5
    delta: float = 0.2

    def __post_init__(self) -> None:
        for label, value in (("tau_i", self.tau_i), ("tau_a", self.tau_a), ("delta", self.delta)):
            if not (0.0 <= value <= 1.0):
                raise ValueError(f"{label} must be in [0,1], got {value}")


class Region(str, Enum):
    INTELLIGENCE_SKEWED = "intelligence-skewed"
    AUTOMATION_SKEWED = "automation-skewed"
    BALANCED = "balanced"
    IDEAL = "ideal"


def classify_region(p: AutonomyPoint, cfg: ManifoldConfig) -> Region:
    """Place a point on the intelligence/automation plane.

    Ideal (both dimensions at or past their maturity thresholds) wins over
    balance; outside it, a gap within delta is balanced, otherwise the larger
    coordinate names the skew. Total: every point gets exactly one region.
    """
    if p.intelligence >= cfg.tau_i and p.automation >= cfg.tau_a:
        return Region.IDEAL
    if abs(p.intelligence - p.automation) <= cfg.delta:
        return Region.BALANCED
    if p.intelligence > p.automation:
        return Region.INTELLIGENCE_SKEWED
    return Region.AUTOMATION_SKEWED


@dataclass(frozen=True)
class FunctionCapability:
    name: str
    automated: bool = False
    self_deciding: bool = False


@dataclass(frozen=True)
class ProcessCapability:
    name: str
    member_functions: tuple[str, ...]
    streamlined: bool = False
    major: bool = False


CHARACTERISTIC_ORDER = (
    "instrumented",
    "standardised",
    "interconnected",
    "integrated",
    "automated",
    "intelligent",
)

#: The first four characteristics form a dependency chain, bottom-up; the
#: last two are checked for presence but not for ordering.
DEPENDENT_CHARACTERISTICS = CHARACTERISTIC_ORDER[:4]


@dataclass(frozen=True)
class CapabilityProfile:
    functions: tuple[FunctionCapability, ...]
    processes: tuple[ProcessCapability, ...]
    all_conditions_autonomous: bool = False
    handles_unanticipated: bool = False
    self_learning: bool = False
    characteristics: Mapping[str, bool] = field(
        default_factory=lambda: {name: False for name in CHARACTERISTIC_ORDER}
    )

    def validate(self) -> None:
        names = {f.name for f in self.functions}
        if len(names) != len(self.functions):
            raise InvalidProfile("duplicate function names")
        automated = {f.name for f in self.functions if f.automated}
        for f in self.functions:
            if f.self_deciding and not f.automated:
                raise InvalidProfile(f"{f.name}: self-deciding functions must be automated")
        for proc in self.processes:
            for member in proc.member_functions:
                if member not in names:
                    raise InvalidProfile(f"{proc.name}: unknown member function {member!r}")
            if proc.streamlined:
                automated_members = [m for m in proc.member_functions if m in automated]
                if len(automated_members) < 2:
                    raise InvalidProfile(
                        f"{proc.name}: a streamlined process chains at least two automated functions"
                    )
        if self.handles_unanticipated and not self.all_conditions_autonomous:
            raise InvalidProfile(
                "handling unanticipated situations implies autonomy under all conditions"
            )
        for key in self.characteristics:
            if key not in CHARACTERISTIC_ORDER:
                raise InvalidProfile(f"unknown characteristic {key!r}")


LEVEL_NAMES = (
    "No Automation",
    "Function Automation",
    "Process Automation",
    "Holistic Automation",
    "Limited Autonomy",
    "Conditional Autonomy",
    "Full Autonomy",
)


@dataclass(frozen=True)
class ScalLevel:
    level: int
    name: str
    rationale: tuple[str, ...]

    def __str__(self) -> str:
        return f"L{self.level} {self.name}"


def assess_scal(profile: CapabilityProfile) -> ScalLevel:
    """Top-down, first-match over the seven levels.

    L6 needs self-learning plus handling of unanticipated situations; L5
    autonomy under all (defined) conditions; L4 at least one self-deciding
    function; L3 every major process streamlined (and at least one declared);
    L2 any streamlined process; L1 any automated function; else L0.
    """
    profile.validate()
    automated = [f.name for f in profile.functions if f.automated]
    self_deciding = [f.name for f in profile.functions if f.self_deciding]
    streamlined = [p.name for p in profile.processes if p.streamlined]
    major = [p.name for p in profile.processes if p.major]
    major_streamlined = [p.name for p in profile.processes if p.major and p.streamlined]

    if profile.self_learning and profile.handles_unanticipated:
        return ScalLevel(6, LEVEL_NAMES[6], (
            "self-learning capability present",
            "handles unanticipated situations autonomously",
        ))
    if profile.all_conditions_autonomous:
        return ScalLevel(5, LEVEL_NAMES[5], (
            "operates autonomously under all defined conditions",
            "no self-learning for unanticipated situations",
        ))
    if self_deciding:
        return ScalLevel(4, LEVEL_NAMES[4], (
            f"self-deciding functions: {', '.join(sorted(self_deciding))}",
            "autonomy limited to specific functions",
        ))
    if major and len(major_streamlined) == len(major):
        return ScalLevel(3, LEVEL_NAMES[3], (
            f"all major processes automated and streamlined: {', '.join(sorted(major))}",
            "decisions follow predefined rules; no self-decision-making",
        ))
    if streamlined:
        return ScalLevel(2, LEVEL_NAMES[2], (
            f"streamlined processes: {', '.join(sorted(streamlined))}",
            "not every major process is automated end-to-end",
        ))
    if automated:
        return ScalLevel(1, LEVEL_NAMES[1], (
            f"automated functions: {', '.join(sorted(automated))}",
            "automated functions stay disconnected; no streamlined process",
        ))
    return ScalLevel(0, LEVEL_NAMES[0], ("no automated functions; fully manual operation",))


def characteristics_check(profile: CapabilityProfile) -> dict:
    """Echo the six flags, list the missing ones, and report chain violations.

    Only the first four characteristics are downward-dependent; automated and
    intelligent may hold without them.
    """
    flags = {name: bool(profile.characteristics.get(name, False)) for name in CHARACTERISTIC_ORDER}
    missing = [name for name in CHARACTERISTIC_ORDER if not flags[name]]
    violations = []
    for hi_index, higher in enumerate(DEPENDENT_CHARACTERISTICS):
        if not flags[higher]:
            continue
        for lower in DEPENDENT_CHARACTERISTICS[:hi_index]:
            if not flags[lower]:
                violations.append(f"{higher} requires {lower}")
    return {"flags": flags, "missing": missing, "violations": violations}


def profile_from_scenario(scenario, events: Iterable[Event]) -> tuple[CapabilityProfile, AutonomyPoint]:
    """Derive the shipped system's own capability profile from a run.

    Functions and processes come from the scenario's automation declaration;
    a process counts as streamlined once the log shows at least one of its
    runs completing (reaching delivery assessment). The autonomy point is the
    automated and self-deciding fractions of the declared functions.
    """
    order_process: dict[str, str] = {}
    completed: set[str] = set()
    for event in events:
        if event.kind is EventKind.ORDER_PLACED:
            order_process[event.payload["order_id"]] = event.payload["process"]
        elif event.kind is EventKind.DELIVERY_ASSESSED:
            process = order_process.get(event.payload["order_id"])
            if process is not None:
                completed.add(process)
    if not completed:
        raise EmptyLog("no completed process in the event log")

    decl = scenario.automation
    functions = tuple(
        FunctionCapability(f.name, f.automated, f.self_deciding) for f in decl.functions
    )
    processes = tuple(
        ProcessCapability(
            p.name,
            tuple(p.member_functions),
            streamlined=p.name in completed,
            major=p.major,
        )
        for p in decl.processes
    )
    profile = CapabilityProfile(
        functions=functions,
        processes=processes,
        all_conditions_autonomous=decl.all_conditions_autonomous,
        handles_unanticipated=decl.handles_unanticipated,
        self_learning=decl.self_learning,
        characteristics=dict(decl.characteristics),
    )
    profile.validate()

    total = len(functions)
    if total == 0:
        point = AutonomyPoint(0.0, 0.0)
    else:
        point = AutonomyPoint(
            intelligence=sum(1 for f in functions if f.self_deciding) / total,
            automation=sum(1 for f in functions if f.automated) / total,
        )
    return profile, point
