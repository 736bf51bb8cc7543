"""Structured reports: a versioned JSON schema plus a human rendering.

Schema (``schema`` = ``symsim-report``, ``version`` = 1)::

    {
      "schema": "symsim-report",
      "version": 1,
      "command": "decide" | "closure" | "symmetries",
      "input": {"sha256": <hex digest of the instance file>, "system": "qubits 2"},
      "result": {...command specific...},
      "timings": {...seconds...}          # only with --timings
    }

Keys are emitted sorted with two-space indentation, so identical results
give byte-identical documents.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

__all__ = ["ReportDocument", "SCHEMA", "VERSION", "digest", "matrix_to_json"]

SCHEMA = "symsim-report"
VERSION = 1


def digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def matrix_to_json(m) -> list:
    """Dense rows of exact entries as strings (``"1/2-i"``)."""
    return [[str(v) for v in row] for row in m.to_dense()]


def _plain(value):
    # normalise tuples and the like so that parse(print(r)) == r
    return json.loads(json.dumps(value))


@dataclass(frozen=True)
class ReportDocument:
    command: str
    input_digest: str
    system: str
    result: dict
    timings: dict | None = None
    version: int = VERSION
    schema: str = field(default=SCHEMA)

    def __post_init__(self):
        object.__setattr__(self, "result", _plain(self.result))
        if self.timings is not None:
            object.__setattr__(self, "timings", _plain(self.timings))

    def to_dict(self) -> dict:
        d = {
            "schema": self.schema,
            "version": self.version,
            "command": self.command,
            "input": {"sha256": self.input_digest, "system": self.system},
            "result": self.result,
        }
        if self.timings is not None:
            d["timings"] = self.timings
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ReportDocument":
        d = json.loads(text)
        if d.get("schema") != SCHEMA:
            raise ValueError(f"not a {SCHEMA} document")
        if d.get("version") != VERSION:
            raise ValueError(f"unsupported report version {d.get('version')!r}")
        return cls(
            command=d["command"],
            input_digest=d["input"]["sha256"],
            system=d["input"]["system"],
            result=d["result"],
            timings=d.get("timings"),
            version=d["version"],
            schema=d["schema"],
        )

    # human rendering ------------------------------------------------------

    def to_human(self) -> str:
        r = self.result
        out = [f"{self.command}: system {self.system} (input sha256 {self.input_digest[:12]})"]
        render = getattr(self, f"_human_{self.command}", None)
        out.extend(render(r) if render else [json.dumps(r, sort_keys=True, indent=2)])
        if self.timings:
            out.append("timings: " + ", ".join(f"{k} {v:.3f}s" for k, v in sorted(self.timings.items())))
        return "\n".join(out) + "\n"

    @staticmethod
    def _human_decide(r):
        a, b, lin = r["condition_a"], r["condition_b"], r["linear"]
        out = [
            f"verdict: {r['verdict']}",
            f"condition (A): {a['status']}  dim ts(P) = {a['dim_p']}, dim ts(P u Q) = {a['dim_pq']}",
        ]
        if b["status"] == "skipped":
            out.append("condition (B): skipped")
        else:
            out.append(
                f"condition (B): {b['status']}  rank(T~) = {b['rank_restricted']}, "
                f"rank(T) = {b['rank_full']}, center dim = {b['center_dim']}"
            )
        out.append(f"linear symmetries: dim P' = {lin['dim_p']}, dim (P u Q)' = {lin['dim_pq']}")
        ar = r["arithmetic"]
        modes = ", ".join(f"{k}: {v['method']}" for k, v in sorted(ar["quadratic_ranks"].items()))
        out.append(f"arithmetic: {modes}" + (" (Monte-Carlo)" if ar["monte_carlo"] else ""))
        if r.get("failure_witness"):
            out.append(f"witness: {r['failure_witness']}")
        if "oracle" in r:
            o = r["oracle"]
            out.append(
                f"oracle: {o['verdict']}  dim <P> = {o['dim_p']}, dim <P u Q> = {o['dim_pq']}"
                f" ({'agrees' if o['agrees'] else 'DISAGREES'})"
            )
        return out

    @staticmethod
    def _human_closure(r):
        out = []
        for name, row in r["rows"].items():
            out.append(
                f"{name}: Lie-dim {row['lie_dim']} (semisimple {row['semisimple_dim']}, "
                f"center {row['center_dim']}), quad {row['quadratic_dim']}, "
                f"lin {row['linear_dim']}, rank {row['projection_rank']}, depth {row['generation_depth']}"
            )
        return out

    @staticmethod
    def _human_symmetries(r):
        out = []
        for kind, block in r["symmetries"].items():
            out.append(f"{kind}: dim {block['dim']}")
            for k, entries in enumerate(block["basis"], start=1):
                body = ", ".join(f"({i},{j})={v}" for i, j, v in entries)
                out.append(f"  S{k}: {body}")
        return out
