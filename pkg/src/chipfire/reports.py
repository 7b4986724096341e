"""JSON report models shared by the CLI and the HTTP service.

Every payload is wrapped in an :class:`Envelope`. Field order is declaration
order, so identical runs serialize to identical bytes apart from ``timing``.
"""

import hashlib
import json
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field

from chipfire.certificates import (
    BrambleCertificate,
    Certificate,
    OrderReport,
    ShoreHittingSet,
    Verification,
)
from chipfire.divisors import ChainStep
from chipfire.families import ExtensionRoles
from chipfire.gonality import IndependenceReport, SearchReport
from chipfire.graph import INFINITE, ExtendedInt, Multigraph, dump_text

SCHEMA_VERSION = 1

Extended = int | Literal["infinite"]


def extended(x: ExtendedInt) -> Extended:
    return "infinite" if x is INFINITE else int(x)


def input_hash(G: Multigraph, *extra: str) -> str:
    """SHA-256 over the canonical graph text and any divisor or certificate text."""
    digest = hashlib.sha256(dump_text(G).encode())
    for part in extra:
        digest.update(b"\0" + part.encode())
    return digest.hexdigest()


class Timing(BaseModel):
    elapsed_seconds: float = 0.0


class Envelope(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    schema_version: int = Field(default=SCHEMA_VERSION, alias="schema")
    command: str
    input_hash: str | None = None
    result: dict[str, Any]
    timing: Timing = Field(default_factory=Timing)

    def to_json(self) -> str:
        return json.dumps(self.model_dump(mode="json", by_alias=True), indent=2) + "\n"


def envelope(
    command: str, result: BaseModel, digest: str | None = None, elapsed: float = 0.0
) -> Envelope:
    return Envelope(
        command=command,
        input_hash=digest,
        result=result.model_dump(mode="json"),
        timing=Timing(elapsed_seconds=round(elapsed, 6)),
    )


# -------------------------------------------------------------------
#   Result bodies
# -------------------------------------------------------------------


class GraphResult(BaseModel):
    n: int
    edges: list[tuple[int, int, int]]
    text: str


class ExtensionResult(BaseModel):
    n: int
    edges: list[tuple[int, int, int]]
    roles: list[str]
    origin: list[int]
    text: str


class RoleMap(BaseModel):
    """Role and origin of every vertex of an extension, written next to its text file."""

    roles: list[str]
    origin: list[int]


class RankResult(BaseModel):
    divisor: list[int]
    degree: int
    rank: int
    rank_target: int | None = None
    meets_target: bool | None = None
    refuted_by: list[int] | None = None


class ChainStepResult(BaseModel):
    fired: list[int]
    divisor: list[int]


class ReduceResult(BaseModel):
    divisor: list[int]
    q: int
    reduced: list[int]
    script: list[int]
    winnable: bool
    chain: list[ChainStepResult] | None = None


class ExhaustedLevel(BaseModel):
    degree: int
    candidates: int


class SearchResult(BaseModel):
    r: int
    multiplicity_free: bool
    minimum_degree: int | None
    witness: list[int] | None
    degrees_exhausted: list[ExhaustedLevel]
    budget_exceeded: bool
    strategy: str
    assumed_lower_bound: int | None = None


class AlphaResult(BaseModel):
    r: int
    alpha: int
    witness: list[int]


class BoundResult(BaseModel):
    r: int
    preconditions_hold: bool
    alpha: int
    upper_bound: int | None
    divisor: list[int] | None


class EggCutResult(BaseModel):
    size: Extended
    pair: tuple[int, int] | None
    edges: list[tuple[int, int, int]]


class CertificateResult(BaseModel):
    kind: Literal["scramble", "bramble"]
    r: int
    valid: bool
    violation: str | None = None
    hitting_number: int | None = None
    hitting_witness: list[int] | None = None
    egg_cut: EggCutResult | None = None
    order: int | None = None
    treewidth_lower_bound: int | None = None
    gonality: int | None = None
    consistent: bool | None = None


class ShoreResult(BaseModel):
    witness: list[int]
    size: int
    cut_size: int
    anchor: int
    hits_all: bool


class ReproResult(BaseModel):
    name: str
    quantity: str
    expected: int
    computed: int | None
    match: bool
    provenance: str
    details: dict[str, Any] = Field(default_factory=dict)
    failed_checks: list[str] = Field(default_factory=list)


# -------------------------------------------------------------------
#   Conversions from engine values
# -------------------------------------------------------------------


def graph_result(G: Multigraph) -> GraphResult:
    return GraphResult(n=G.n, edges=G.edges(), text=dump_text(G))


def extension_result(G: Multigraph, roles: ExtensionRoles) -> ExtensionResult:
    return ExtensionResult(
        n=G.n,
        edges=G.edges(),
        roles=list(roles.role),
        origin=list(roles.origin),
        text=dump_text(G),
    )


def role_map(roles: ExtensionRoles) -> RoleMap:
    return RoleMap(roles=list(roles.role), origin=list(roles.origin))


def chain_result(chain: list[ChainStep]) -> list[ChainStepResult]:
    return [ChainStepResult(fired=sorted(s.fired), divisor=list(s.divisor)) for s in chain]


def search_result(report: SearchReport) -> SearchResult:
    return SearchResult(
        r=report.r,
        multiplicity_free=report.multiplicity_free,
        minimum_degree=report.minimum_degree,
        witness=list(report.witness) if report.witness is not None else None,
        degrees_exhausted=[ExhaustedLevel(degree=d, candidates=c) for d, c in report.degrees_exhausted],
        budget_exceeded=report.budget_exceeded,
        strategy=report.strategy,
        assumed_lower_bound=report.assumed_lower_bound,
    )


def alpha_result(report: IndependenceReport) -> AlphaResult:
    return AlphaResult(r=report.r, alpha=report.alpha, witness=list(report.witness))


def certificate_result(
    cert: Certificate,
    verification: Verification,
    order: OrderReport | None = None,
    gonality: int | None = None,
) -> CertificateResult:
    kind: Literal["scramble", "bramble"] = (
        "bramble" if isinstance(cert, BrambleCertificate) else "scramble"
    )
    body = CertificateResult(
        kind=kind,
        r=cert.r,
        valid=verification.valid,
        violation=str(verification.violation) if verification.violation else None,
    )
    if order is None:
        return body
    body.hitting_number = order.hitting.size
    body.hitting_witness = list(order.hitting.witness)
    body.egg_cut = EggCutResult(
        size=extended(order.egg_cut.size),
        pair=order.egg_cut.pair,
        edges=list(order.egg_cut.edges),
    )
    body.order = order.order
    if kind == "bramble":
        body.treewidth_lower_bound = order.hitting.size - cert.r
    if gonality is not None:
        body.gonality = gonality
        body.consistent = order.order <= gonality
    return body


def shore_result(shore: ShoreHittingSet) -> ShoreResult:
    return ShoreResult(
        witness=list(shore.witness),
        size=shore.size,
        cut_size=shore.cut_size,
        anchor=shore.anchor,
        hits_all=shore.hits_all,
    )
