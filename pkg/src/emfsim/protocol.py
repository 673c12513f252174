"""Serving-sector selection policies and the exposure-aware state machine.

Baseline policy: attach to the highest-RSS candidate.  Constrained policy:
form the admissible set S = {i : pd_i < gamma} (strict inequality) and attach
to the highest-RSS member of S; an empty S is an outage.  Ties always break
toward the lowest sector id so runs are deterministic.

The state machine models the dynamic behavior: initial scan, handover when
the serving sector starts violating the threshold, outage when nothing is
admissible, and a periodic forced re-search driven by a countdown timer.
Each `step_state_machine` call consumes one clock tick together with the
candidate reports observed on that tick.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

T_UPDATE_DEFAULT = 100  # ticks between forced re-searches


class Phase(enum.Enum):
    SCANNING = "scanning"
    ATTACHED = "attached"
    HANDOVER = "handover"
    OUTAGE = "outage"


@dataclass(frozen=True)
class CandidateReport:
    """Per-sector measurements a UE decision is based on.

    `sar` and `rate` ride along so outcomes can be filled without another
    lookup; selection itself uses only `rss` and `pd`.
    """

    sector_id: int
    rss: float            # dBm
    pd: float             # W/m^2
    sar: float = 0.0      # W/kg
    rate: float = 0.0     # bit/s

    def __post_init__(self):
        if self.pd < 0:
            raise ValueError("pd must be non-negative")


@dataclass(frozen=True)
class AttachmentOutcome:
    """Chosen serving sector (None = outage) and the exposure experienced."""

    serving_sector: int | None
    experienced_pd: float
    experienced_sar: float
    rate: float
    handover_count: int = 0

    @property
    def is_outage(self) -> bool:
        return self.serving_sector is None


_OUTAGE = AttachmentOutcome(serving_sector=None, experienced_pd=0.0,
                            experienced_sar=0.0, rate=0.0)


def _best(candidates: Iterable[CandidateReport]) -> CandidateReport:
    return min(candidates, key=lambda c: (-c.rss, c.sector_id))


def select_baseline(candidates: Sequence[CandidateReport]) -> AttachmentOutcome:
    """Attach to the highest-RSS candidate, lowest sector id on ties."""
    if not candidates:
        raise ValueError("candidate list is empty (malformed drop)")
    best = _best(candidates)
    return AttachmentOutcome(serving_sector=best.sector_id, experienced_pd=best.pd,
                             experienced_sar=best.sar, rate=best.rate)


def select_constrained(candidates: Sequence[CandidateReport],
                       gamma: float) -> AttachmentOutcome:
    """Highest-RSS attach restricted to candidates with pd strictly below gamma."""
    if not candidates:
        raise ValueError("candidate list is empty (malformed drop)")
    if not (gamma > 0) or math.isnan(gamma):
        raise ValueError("gamma must be strictly positive")
    admissible = [c for c in candidates if c.pd < gamma]
    if not admissible:
        return _OUTAGE
    best = _best(admissible)
    return AttachmentOutcome(serving_sector=best.sector_id, experienced_pd=best.pd,
                             experienced_sar=best.sar, rate=best.rate)


@dataclass(frozen=True)
class ProtocolState:
    phase: Phase = Phase.SCANNING
    serving: int | None = None
    timer: int = T_UPDATE_DEFAULT
    handover_count: int = 0

    def __post_init__(self):
        if self.timer < 0:
            raise ValueError("timer must be non-negative")
        if self.phase in (Phase.ATTACHED, Phase.HANDOVER) and self.serving is None:
            raise ValueError(f"{self.phase.value} state requires a serving sector")
        if self.phase is Phase.OUTAGE and self.serving is not None:
            raise ValueError("outage state cannot have a serving sector")


def _full_search(state: ProtocolState, candidates: Sequence[CandidateReport],
                 gamma: float, t_update: int) -> ProtocolState:
    admissible = [c for c in candidates if c.pd < gamma]
    if not admissible:
        return ProtocolState(phase=Phase.OUTAGE, serving=None, timer=t_update,
                             handover_count=state.handover_count)
    best = _best(admissible)
    if state.serving is None:
        return ProtocolState(phase=Phase.ATTACHED, serving=best.sector_id,
                             timer=t_update, handover_count=state.handover_count)
    if best.sector_id != state.serving:
        return ProtocolState(phase=Phase.HANDOVER, serving=best.sector_id,
                             timer=t_update, handover_count=state.handover_count + 1)
    return ProtocolState(phase=Phase.ATTACHED, serving=state.serving,
                         timer=t_update, handover_count=state.handover_count)


def step_state_machine(state: ProtocolState, candidates: Sequence[CandidateReport],
                       gamma: float, t_update: int = T_UPDATE_DEFAULT) -> ProtocolState:
    """Advance the per-UE machine by one tick of fresh candidate reports."""
    if not (gamma > 0) or math.isnan(gamma):
        raise ValueError("gamma must be strictly positive")
    if t_update < 1:
        raise ValueError("t_update must be >= 1")

    if state.phase is Phase.SCANNING:
        return _full_search(state, candidates, gamma, t_update)

    timer = state.timer - 1
    if timer <= 0:
        return _full_search(state, candidates, gamma, t_update)

    if state.phase is Phase.OUTAGE:
        # waits for the next forced re-search
        return replace(state, timer=timer)

    reports = {c.sector_id: c for c in candidates}
    serving_report = reports.get(state.serving)

    if state.phase is Phase.HANDOVER:
        if serving_report is not None and serving_report.pd < gamma:
            return replace(state, phase=Phase.ATTACHED, timer=timer)
        # target went inadmissible before completing; pick again
        return _violation_handover(state, candidates, gamma, timer)

    # Phase.ATTACHED
    if serving_report is None or serving_report.pd >= gamma:
        return _violation_handover(state, candidates, gamma, timer)
    return replace(state, timer=timer)


def _violation_handover(state: ProtocolState, candidates: Sequence[CandidateReport],
                        gamma: float, timer: int) -> ProtocolState:
    admissible = [c for c in candidates if c.pd < gamma]
    if not admissible:
        return ProtocolState(phase=Phase.OUTAGE, serving=None, timer=timer,
                             handover_count=state.handover_count)
    best = _best(admissible)
    count = state.handover_count + (1 if best.sector_id != state.serving else 0)
    return ProtocolState(phase=Phase.HANDOVER, serving=best.sector_id,
                         timer=timer, handover_count=count)
