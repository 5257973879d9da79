"""Run reports: per-group order tables, structure summaries and check results.

JSON output is canonical (sorted keys, two-space indent, integers only), so
re-serializing a parsed report reproduces it byte for byte.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .errors import NuForgeError
from .lab import CheckResult
from .nu import NuRealization, tensor_report

SCHEMA_VERSION = 1


class ReportInvariantError(NuForgeError):
    pass


def group_orders(r: NuRealization) -> dict:
    g = r.group
    return {
        "G": g.order,
        "G_derived": int(len(g.derived_subgroup())),
        "G_center": int(len(g.center())),
        "nu": r.order,
        "upsilon": r.upsilon.order(),
        "mu": r.mu.order(),
    }


@dataclass
class GroupSection:
    label: str
    source: str
    orders: dict
    tensor_square: dict | None = None
    series: dict | None = None
    checks: list = field(default_factory=list)
    elapsed: float = 0.0

    def guard(self):
        o = self.orders
        if o["upsilon"] * o["G"] ** 2 != o["nu"]:
            raise ReportInvariantError(f"{self.label}: |Upsilon| |G|^2 != |nu|")
        if o["upsilon"] != o["mu"] * o["G_derived"]:
            raise ReportInvariantError(f"{self.label}: |Upsilon| / |mu| != |G'|")

    def as_dict(self, timings: bool = False) -> dict:
        self.guard()
        d = {"group": {"label": self.label, "source": self.source}, "orders": self.orders}
        if self.tensor_square is not None:
            d["tensor_square"] = self.tensor_square
        if self.series is not None:
            d["series"] = self.series
        if self.checks or self.series is None:
            d["checks"] = [c.as_dict(timings) for c in self.checks]
        if timings:
            d["elapsed_ms"] = int(round(self.elapsed * 1000))
        return d


def section_for(r: NuRealization, source: str, *, checks=(), series=None,
                with_structure: bool = True, elapsed: float = 0.0) -> GroupSection:
    ts = tensor_report(r).as_dict() if with_structure else None
    return GroupSection(r.group.label, source, group_orders(r), ts, series, list(checks), elapsed)


@dataclass
class RunReport:
    command: str
    seed: int
    sections: list
    timings: bool = False

    @property
    def checks(self) -> list:
        return [c for s in self.sections for c in s.checks]

    @property
    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    def first_failure(self) -> CheckResult | None:
        f = self.failures
        return f[0] if f else None

    def as_dict(self) -> dict:
        first = self.first_failure()
        return {
            "schema_version": SCHEMA_VERSION,
            "tool": "nu-forge",
            "tool_version": __version__,
            "command": self.command,
            "seed": self.seed,
            "groups": [s.as_dict(self.timings) for s in self.sections],
            "summary": {
                "checks": len(self.checks),
                "passed": len(self.checks) - len(self.failures),
                "failed": len(self.failures),
                "first_failure": None if first is None else f"{first.group_label}:{first.check_id}",
            },
        }

    def to_json(self) -> str:
        return canonical_json(self.as_dict())

    def to_text(self) -> str:
        return render_text(self.as_dict())


def _plain(x):
    """Convert numpy scalars and containers to plain JSON types; floats are refused."""
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        raise TypeError("reports carry no floating-point fields")
    return x


def canonical_json(d: dict) -> str:
    return json.dumps(_plain(d), sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def _table(rows) -> list:
    widths = [max(len(str(r[i])) for r in rows) for i in range(len(rows[0]))]
    return ["  ".join(str(c).ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]


def render_text(d: dict) -> str:
    out = [f"nu-forge {d['tool_version']}  {d['command']}  seed={d['seed']}"]
    groups = d["groups"]
    if groups:
        rows = [("group", "|G|", "|G'|", "|Z(G)|", "|nu|", "|Upsilon|", "|mu|")]
        for s in groups:
            o = s["orders"]
            rows.append((s["group"]["label"], o["G"], o["G_derived"], o["G_center"], o["nu"],
                         o["upsilon"], o["mu"]))
        out += [""] + _table(rows)
    for s in groups:
        label = s["group"]["label"]
        ts = s.get("tensor_square")
        if ts:
            inv = ts["abelian_invariants"]
            inv = "nonabelian" if inv is None else "x".join(f"C{k}" for k in inv) or "trivial"
            out.append(f"\n{label}: tensor square order {ts['order']}, exponent {ts['exponent']}, "
                       f"|derived| {ts['derived_order']}, class {ts['nilpotency_class']}, {inv}")
        if "series" in s:
            ser = s["series"]
            for part in ("G", "nu"):
                r = ser[part]
                out.append(f"{label} {ser['which']} of {part}: "
                           + ", ".join(map(str, r["orders"])) + f"  (stabilizes at {r['stabilized_at']})")
        checks = s.get("checks") or []
        if checks:
            rows = [("check", "verdict", "tuples", "witness")]
            rows += [(c["check_id"], c["verdict"], c["tuples_checked"], c["witness"] or "")
                     for c in checks]
            out += _table(rows)
    sm = d["summary"]
    if sm["checks"]:
        out.append(f"\n{sm['passed']}/{sm['checks']} checks passed"
                   + (f"; first failure {sm['first_failure']}" if sm["failed"] else ""))
    return "\n".join(out) + "\n"
