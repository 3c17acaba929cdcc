"""Falsification certificates and their replay.

A :class:`Construction` records how a test matrix was produced: a named base
builder with JSON parameters followed by a list of operations (scaling,
diagonal shift, border extension, direct sum with a multiple of the identity,
graph padding).  A :class:`WitnessReport` stores the construction, the matrix
literal, both verdicts and the direction of the disagreement.  Replaying a
report rebuilds the matrix from the construction, checks that it equals the
stored literal, and recomputes both verdicts.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import InputError, SignLabError
from .numeric import (DEFAULT_TOL, HermitianMatrix, PositivityVerdict, decode_matrix,
                      encode_matrix, positivity_verdict)

SCHEMA_VERSION = 1


class Direction(str, Enum):
    PD_LOST = "PDlost"
    PD_GAINED = "PDgained"
    PSD_LOST = "PSDlost"
    PSD_GAINED = "PSDgained"
    HERMITIANITY_LOST = "HermitianityLost"


def direction_for(mode: str, pre_positive: bool, post_hermitian: bool) -> Direction:
    if pre_positive and not post_hermitian:
        return Direction.HERMITIANITY_LOST
    if mode == "pd":
        return Direction.PD_LOST if pre_positive else Direction.PD_GAINED
    return Direction.PSD_LOST if pre_positive else Direction.PSD_GAINED


def _enc(v):
    if isinstance(v, (complex, np.complexfloating)):
        return [float(v.real), float(v.imag)]
    if isinstance(v, np.ndarray):
        return encode_matrix(v) if v.ndim == 2 else [_enc(x) for x in v.tolist()]
    if isinstance(v, (list, tuple)):
        return [_enc(x) for x in v]
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    return v


@dataclass(frozen=True)
class Construction:
    """Base builder name, its parameters, and the operations applied afterwards."""

    name: str
    params: dict = field(default_factory=dict)
    ops: tuple = ()

    def then(self, op: str, *args) -> "Construction":
        return Construction(self.name, self.params, self.ops + ((op,) + tuple(args),))

    def to_json(self) -> dict:
        return {"name": self.name, "params": {k: _enc(v) for k, v in self.params.items()},
                "ops": [[op[0]] + [_enc(a) for a in op[1:]] for op in self.ops]}

    @classmethod
    def from_json(cls, obj) -> "Construction":
        return cls(obj["name"], dict(obj.get("params", {})),
                   tuple(tuple(op) for op in obj.get("ops", [])))

    def label(self) -> str:
        tail = "".join(f"|{op[0]}" for op in self.ops)
        return f"{self.name}{tail}"


# Base builders: name -> callable(params, context) -> (matrix, exact_singular).
BUILDERS: dict = {}


def builder(name):
    def register(fn):
        BUILDERS[name] = fn
        return fn
    return register


@builder("literal")
def _literal(params, ctx):
    return decode_matrix(params["matrix"]), bool(params.get("exactSingular", False))


def apply_ops(M: np.ndarray, stamp: bool, ops) -> tuple[np.ndarray, bool, bool]:
    """Apply construction operations; returns (matrix, pre stamp, post stamp)."""
    post_stamp = False
    for op in ops:
        kind, args = op[0], op[1:]
        post_stamp = False
        if kind == "scale":
            M = float(args[0]) * M
        elif kind == "shift":
            t = float(args[0])
            M = M + t * np.eye(M.shape[0])
            stamp = stamp and t == 0
        elif kind == "extend":
            n = M.shape[0]
            E = np.empty((n + 1, n + 1), dtype=complex)
            E[:n, :n] = M
            E[n, :n] = M[-1, :]
            E[:n, n] = M[:, -1]
            dup = args[0] == "duplicate"
            if dup:
                E[n, n] = M[-1, -1].real
            elif args[0] == "rel":
                E[n, n] = M[-1, -1].real * (1 + float(args[1]))
            else:
                E[n, n] = float(args[0])
            M = E
            # det E = (x - a_nn) det A, so a singular A stays singular.
            stamp = dup or stamp
            post_stamp = dup
        elif kind == "sum-identity":
            k, c = int(args[0]), float(args[1])
            n = M.shape[0]
            E = np.zeros((n + k, n + k), dtype=complex)
            E[:n, :n] = M
            E[n:, n:] = c * np.eye(k)
            M = E
        elif kind == "pad":
            from .witnesses import extension_pad
            adj = np.asarray(args[0], dtype=bool)
            eps = float(args[2])
            M = extension_pad(adj, [int(s) for s in args[1]], M, eps).entries
            # With eps = 0 the result is A plus an identity block, singular iff A is.
            stamp = stamp and eps == 0
        else:
            raise InputError(f"unknown construction op {kind!r}")
    return M, stamp, post_stamp


def rebuild(c: Construction, ctx: dict | None = None) -> tuple[np.ndarray, bool, bool]:
    ctx = ctx or {}
    if c.name not in BUILDERS:
        # Lazily import the modules that register builders.
        from . import verifier  # noqa: F401
        from . import graph_verifier  # noqa: F401
    if c.name not in BUILDERS:
        raise InputError(f"unknown construction {c.name!r}")
    M, stamp = BUILDERS[c.name](c.params, ctx)
    return apply_ops(np.asarray(M, dtype=complex), stamp, c.ops)


@dataclass(frozen=True)
class WitnessReport:
    matrix: np.ndarray
    image: np.ndarray
    pre: PositivityVerdict
    post: PositivityVerdict
    construction: Construction
    direction: Direction
    mode: str
    strategy: str

    @property
    def margins(self) -> tuple[float, float]:
        return self.pre.min_eigenvalue, self.post.min_eigenvalue

    def to_json(self) -> dict:
        return {"matrix": encode_matrix(self.matrix), "image": encode_matrix(self.image),
                "preVerdict": self.pre.to_dict(), "postVerdict": self.post.to_dict(),
                "construction": self.construction.to_json(), "direction": self.direction.value,
                "margins": list(self.margins), "mode": self.mode, "strategy": self.strategy}


@dataclass(frozen=True)
class PairWitness:
    """Loewner-order counterexample: ``A >= B`` and ``f[A] >= f[B]`` disagree."""

    A: np.ndarray
    B: np.ndarray
    diff: PositivityVerdict
    image_diff: PositivityVerdict
    construction: Construction
    order: str  # "psd" (>=) or "pd" (>)
    strategy: str

    @property
    def direction(self) -> str:
        return "orderLost" if self.diff.positive(self.order) else "orderGained"

    def to_json(self) -> dict:
        return {"A": encode_matrix(self.A), "B": encode_matrix(self.B),
                "differenceVerdict": self.diff.to_dict(), "imageDifferenceVerdict": self.image_diff.to_dict(),
                "construction": self.construction.to_json(), "order": self.order,
                "direction": self.direction, "strategy": self.strategy}


class Outcome(str, Enum):
    FALSIFIED = "Falsified"
    NOT_FALSIFIED = "NotFalsified"


NOT_A_PROOF = ("NotFalsified means no counterexample was found within the budget; "
               "it is evidence, not a proof of preserver-hood.")


@dataclass
class VerdictReport:
    outcome: Outcome
    witness: object | None
    checks_run: dict
    skipped: dict
    context: dict

    @property
    def falsified(self) -> bool:
        return self.outcome is Outcome.FALSIFIED

    def to_json(self) -> dict:
        out = {"schemaVersion": SCHEMA_VERSION, "outcome": self.outcome.value,
               "checksRun": dict(sorted(self.checks_run.items())),
               "skipped": dict(sorted(self.skipped.items())), "context": self.context}
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        else:
            out["note"] = NOT_A_PROOF
        return out


# ------------------------------------------------------------------ replay


@dataclass(frozen=True)
class ReplayResult:
    ok: bool
    reason: str
    pre: PositivityVerdict | None = None
    post: PositivityVerdict | None = None


def _verdict_disagrees(pre, post, mode):
    a, b = pre.positive(mode), post.positive(mode)
    return a is not None and b is not None and a != b


def replay(report: dict, tol: float | None = None) -> ReplayResult:
    """Re-execute a Falsified report (as produced by ``VerdictReport.to_json``)."""
    from .domains import DomainSpec
    from .transforms import apply_entrywise, apply_entrywise_graph, fn_from_spec

    if report.get("outcome") != Outcome.FALSIFIED.value or "witness" not in report:
        raise InputError("only Falsified reports can be replayed")
    ctx = report["context"]
    tol = ctx.get("tolerance", DEFAULT_TOL) if tol is None else tol
    f = fn_from_spec(ctx["fn"])
    w = report["witness"]
    build_ctx = dict(ctx)
    if "domain" in ctx:
        build_ctx["domainSpec"] = DomainSpec.from_json(ctx["domain"])
    cons = Construction.from_json(w["construction"])
    try:
        if "A" in w:  # Loewner pair witness
            return _replay_pair(f, w, cons, build_ctx, tol)
        M, stamp, post_stamp = rebuild(cons, build_ctx)
    except SignLabError as exc:
        return ReplayResult(False, f"rebuild failed: {exc}")
    literal = decode_matrix(w["matrix"])
    if M.shape != literal.shape or not np.array_equal(M, literal):
        return ReplayResult(False, "rebuilt matrix differs from the stored literal")
    if "domainSpec" in build_ctx:
        d = build_ctx["domainSpec"]
        adj = np.asarray(ctx["adjacency"], dtype=bool) if "adjacency" in ctx else None
        inside = d.contains(M)
        if adj is not None:
            inside |= (~adj & ~np.eye(len(adj), dtype=bool)) & (M == 0)
        if not np.all(inside):
            return ReplayResult(False, "matrix has entries outside the domain")
    adj = ctx.get("adjacency")
    image = (apply_entrywise_graph(f, np.asarray(adj, dtype=bool), M) if adj is not None
             else apply_entrywise(f, M))
    pre = positivity_verdict(M, tol, exact_singular=stamp)
    post = positivity_verdict(image, tol, exact_singular=post_stamp)
    mode = w["mode"]
    if not _verdict_disagrees(pre, post, mode):
        return ReplayResult(False, "verdicts agree on replay", pre, post)
    got = direction_for(mode, pre.positive(mode), post.hermitian).value
    if got != w["direction"]:
        return ReplayResult(False, f"direction {got} differs from stored {w['direction']}", pre, post)
    return ReplayResult(True, "reproduced", pre, post)


def _replay_pair(f, w, cons, ctx, tol):
    from .transforms import apply_entrywise
    from .numeric import loewner_compare

    A, _, _ = rebuild(Construction.from_json(w["construction"]["params"]["A"]), ctx)
    B, _, _ = rebuild(Construction.from_json(w["construction"]["params"]["B"]), ctx)
    if not (np.array_equal(A, decode_matrix(w["A"])) and np.array_equal(B, decode_matrix(w["B"]))):
        return ReplayResult(False, "rebuilt pair differs from the stored literals")
    diff = loewner_compare(HermitianMatrix(A), HermitianMatrix(B), tol)
    image_diff = positivity_verdict(apply_entrywise(f, A) - apply_entrywise(f, B), tol)
    order = w["order"]
    if not _verdict_disagrees(diff, image_diff, order):
        return ReplayResult(False, "order verdicts agree on replay", diff, image_diff)
    return ReplayResult(True, "reproduced", diff, image_diff)


def dumps(obj: dict) -> str:
    """Canonical JSON (sorted keys) so identical runs give identical bytes."""
    return json.dumps(obj, sort_keys=True, indent=2)
