"""Perspicuity classification and per-session reports.

A model is perspicuous when its normalized form translates to a sound
workflow net. Everything short of that carries a stage tag saying where it
fell out of the pipeline: a mixed gateway (no repair exists), a net whose
parts do not all lie between source and sink, an unsound net, or a state
space too large to decide.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .blocks import Block, detect_blocks
from .eventlog import EventLog, expand_reconnect, parse_timestamp
from .metrics import SessionMetrics, compute_session_metrics
from .model import ProcessModel
from .normalize import AppliedRule, NormalizationOutcome, normalize
from .replay import replay
from .soundness import SOUND, UNKNOWN, SoundnessReport, Violation, check_soundness
from .wfnet import to_wfnet

STAGES = ("MixedGateway", "NotWFStructured", "Unsound", "StateSpaceExceeded", "Sound")


@dataclass(frozen=True)
class PerspicuityVerdict:
    perspicuous: bool
    stage: str
    normalization: NormalizationOutcome
    soundness: SoundnessReport | None  # None when normalization rejected

    def to_dict(self) -> dict:
        return {
            "perspicuous": self.perspicuous,
            "stage": self.stage,
            "normalization": self.normalization.to_dict(),
            "soundness": self.soundness.to_dict() if self.soundness else None,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PerspicuityVerdict":
        norm = data["normalization"]
        outcome = NormalizationOutcome(
            model=None,  # the JSON form does not carry the normalized model
            rejected=norm["rejected"],
            reason=norm["reason"],
            applied_rules=tuple(
                AppliedRule(r["rule"], tuple(r["nodes"])) for r in norm["applied_rules"]
            ),
        )
        sound = None
        if data["soundness"] is not None:
            s = data["soundness"]
            sound = SoundnessReport(
                verdict=s["verdict"],
                violations=tuple(
                    Violation(
                        kind=v["kind"],
                        witness=v["witness"],
                        trace=tuple(v["trace"]) if v["trace"] is not None else None,
                    )
                    for v in s["violations"]
                ),
                states_explored=s["states_explored"],
            )
        return cls(
            perspicuous=data["perspicuous"],
            stage=data["stage"],
            normalization=outcome,
            soundness=sound,
        )


def classify_model(model: ProcessModel, max_states: int | None = None) -> PerspicuityVerdict:
    """Normalize, translate, check soundness; stage tells where it stopped."""
    if not model.nodes:
        raise ValueError("empty model")
    outcome = normalize(model)
    if outcome.rejected:
        return PerspicuityVerdict(
            perspicuous=False,
            stage="MixedGateway",
            normalization=outcome,
            soundness=None,
        )
    report = check_soundness(to_wfnet(outcome.model), max_states)
    if report.verdict == UNKNOWN:
        stage = "StateSpaceExceeded"
    elif any(v.kind == "NotWFStructured" for v in report.violations):
        stage = "NotWFStructured"
    elif report.verdict == SOUND:
        stage = "Sound"
    else:
        stage = "Unsound"
    return PerspicuityVerdict(
        perspicuous=stage == "Sound",
        stage=stage,
        normalization=outcome,
        soundness=report,
    )


@dataclass(frozen=True)
class SessionReport:
    session_id: str
    metrics: SessionMetrics
    blocks: tuple[Block, ...]
    verdict: PerspicuityVerdict

    def to_dict(self) -> dict:
        return {
            "session_id": self.session_id,
            "metrics": self.metrics.to_dict(),
            "blocks": [b.to_dict() for b in self.blocks],
            "verdict": self.verdict.to_dict(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "SessionReport":
        blocks = tuple(
            Block(
                split=b["split"],
                join=b["join"],
                members=frozenset(b["members"]),
                completion_seq=0,  # not serialized; JSON-level round-trip only
                interval=(
                    parse_timestamp(b["interval"][0]),
                    parse_timestamp(b["interval"][1]),
                ),
                whole=b["whole"],
            )
            for b in data["blocks"]
        )
        return cls(
            session_id=data["session_id"],
            metrics=SessionMetrics.from_dict(data["metrics"]),
            blocks=blocks,
            verdict=PerspicuityVerdict.from_dict(data["verdict"]),
        )

    @classmethod
    def from_json(cls, text: str) -> "SessionReport":
        return cls.from_dict(json.loads(text))


def classify_session(log: EventLog, max_states: int | None = None) -> SessionReport:
    """Replay, measure, and classify one session end to end."""
    expanded = expand_reconnect(log)
    final = replay(expanded)
    blocks = tuple(detect_blocks(final, expanded))
    metrics = compute_session_metrics(expanded, blocks=list(blocks))
    verdict = classify_model(final, max_states)
    return SessionReport(
        session_id=log.session_id,
        metrics=metrics,
        blocks=blocks,
        verdict=verdict,
    )
