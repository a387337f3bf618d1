"""Two-sided vanishing certificates, regularity truncation and parameter bounds.

A bundle E on P^n passes when

    h^i(E(m)) = 0        for 1 <= i <= n and m >= 0, and
    h^i(E^v(m)) = 0      for 1 <= i <= n and m >= 0,

the second family being h^{n-i}(E(-m-n-1)) = 0 under Serre duality.  Both
families are infinite; regularity bounds read off the presentation reduce
each to a finite window.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import comb

from . import __version__
from .cohomology import PresentedBundle, _all_cohomology, dual_bundle_cohomology
from .constructors import DEGENERATE, bundle_from_provenance, local_freeness_probe
from .linalg import QQ, field_from_name

SCHEMA = "mcm-cert/1"


def regularity_bound(E: PresentedBundle) -> int:
    """p such that E is p-regular.

    From 0 -> A -> B -> E -> 0, E is p-regular once B is p-regular and A is
    (p+1)-regular, and O(d) is (-d)-regular.
    """
    cands = [-b for b in E.target.twists] + [-a - 1 for a in E.source.twists]
    return max(cands)


def dual_regularity_bound(E: PresentedBundle) -> int:
    """p such that B^v is p-regular and A^v is (p-1)-regular.

    With 0 -> E^v -> B^v -> A^v -> 0 this makes E^v p-regular as soon as
    h^1(E^v(p-1)) = 0, which the dual window itself checks (it runs past p).
    """
    cands = list(E.target.twists) + [a + 1 for a in E.source.twists]
    return max(cands)


def _grid(values_by_m, n):
    """Turn {m: [h^0..h^n]} into {"i": [...]} ordered by m."""
    ms = sorted(values_by_m)
    return {str(i): [values_by_m[m][i] for m in ms] for i in range(n + 1)}


@dataclass
class MCMCertificate:
    provenance: str
    n: int
    rank: int
    verdict: str
    field: str
    positive_window: tuple
    positive_grid: dict
    dual_window: tuple
    dual_grid: dict
    boundary_window: tuple
    boundary_grid: dict
    regularity: dict
    witness: dict = None
    probe: dict = None
    flags: dict = dc_field(default_factory=dict)
    engine_version: str = __version__
    schema: str = SCHEMA

    @property
    def passed(self):
        return self.verdict == "pass"

    def h(self, side, i, m):
        """Look up an evidence entry; ``side`` is positive, dual or boundary."""
        lo, hi = getattr(self, f"{side}_window")
        if not lo <= m <= hi:
            raise KeyError(f"twist {m} outside the {side} window [{lo}, {hi}]")
        return getattr(self, f"{side}_grid")[str(i)][m - lo]

    def summary(self):
        head = f"{self.verdict.upper()} {self.provenance}"
        if self.witness:
            w = self.witness
            head += f"  witness: {w['side']} side h^{w['i']}(m={w['m']}) = {w['value']} ({w['meaning']})"
        if self.flags.get("probabilistic"):
            head += f"  [probabilistic: {self.field}]"
        if self.flags.get("mcm_interpretation_withheld"):
            head += "  [not locally free: MCM reading withheld]"
        return head

    def to_dict(self):
        return {
            "schema": self.schema,
            "engine_version": self.engine_version,
            "provenance": self.provenance,
            "n": self.n,
            "rank": self.rank,
            "verdict": self.verdict,
            "field": self.field,
            "windows": {
                "positive": list(self.positive_window),
                "dual": list(self.dual_window),
                "boundary": list(self.boundary_window),
            },
            "evidence": {
                "positive": self.positive_grid,
                "dual": self.dual_grid,
                "boundary": self.boundary_grid,
            },
            "regularity": self.regularity,
            "witness": self.witness,
            "probe": self.probe,
            "flags": self.flags,
        }

    def to_json(self, indent=2):
        return json.dumps(self.to_dict(), indent=indent, sort_keys=True)

    @classmethod
    def from_dict(cls, d):
        if d.get("schema") != SCHEMA:
            raise ValueError(f"unsupported certificate schema {d.get('schema')!r}")
        w, ev = d["windows"], d["evidence"]
        return cls(
            provenance=d["provenance"],
            n=d["n"],
            rank=d["rank"],
            verdict=d["verdict"],
            field=d["field"],
            positive_window=tuple(w["positive"]),
            positive_grid=ev["positive"],
            dual_window=tuple(w["dual"]),
            dual_grid=ev["dual"],
            boundary_window=tuple(w["boundary"]),
            boundary_grid=ev["boundary"],
            regularity=d["regularity"],
            witness=d.get("witness"),
            probe=d.get("probe"),
            flags=d.get("flags", {}),
            engine_version=d.get("engine_version", "?"),
        )

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def _first_nonzero(grid, lo, n, side, describe):
    # scan by twist, then by degree, so the witness is the smallest twist
    for k, m in enumerate(range(lo, lo + len(grid["0"]))):
        for i in range(1, n + 1):
            v = grid[str(i)][k]
            if v:
                return {"side": side, "i": i, "m": m, "value": v, "meaning": describe(i, m)}
    return None


def mcm_vanishing_check(E: PresentedBundle, field=QQ, trials=16, seed=0,
                        extra=0) -> MCMCertificate:
    """Check both vanishing families on their regularity windows.

    ``extra`` widens both windows (used to spot-check truncation).  Failures
    are verdicts with a witness, never exceptions; the positive side is
    reported first.
    """
    n = E.n
    reg, reg_d = regularity_bound(E), dual_regularity_bound(E)
    hi_pos = max(0, reg + n) + extra
    hi_dual = max(0, reg_d + n) + extra

    pos = {m: _all_cohomology(E, m, field) for m in range(0, hi_pos + 1)}
    dual = {m: [dual_bundle_cohomology(E, m, i, field) for i in range(n + 1)]
            for m in range(0, hi_dual + 1)}
    gap = {m: _all_cohomology(E, m, field) for m in range(-n, 0)}
    pos_grid, dual_grid = _grid(pos, n), _grid(dual, n)

    witness = _first_nonzero(pos_grid, 0, n, "positive", lambda i, m: f"h^{i}(E({m}))")
    if witness is None:
        witness = _first_nonzero(
            dual_grid, 0, n, "dual",
            lambda i, m: f"h^{i}(E^v({m})) = h^{n - i}(E({-m - n - 1}))",
        )
    probe = local_freeness_probe(E, trials, seed, field)
    probe_doc = dict(probe.to_dict(), trials_requested=trials)
    flags = {
        "probabilistic": bool(field.probabilistic),
        "mcm_interpretation_withheld": probe.verdict == DEGENERATE,
        "locally_free": probe.verdict,
    }
    return MCMCertificate(
        provenance=E.provenance,
        n=n,
        rank=E.rank,
        verdict="fail" if witness else "pass",
        field=field.name,
        positive_window=(0, hi_pos),
        positive_grid=pos_grid,
        dual_window=(0, hi_dual),
        dual_grid=dual_grid,
        boundary_window=(-n, -1),
        boundary_grid=_grid(gap, n),
        regularity={"E": reg, "E_dual": reg_d},
        witness=witness,
        probe=probe_doc,
        flags=flags,
    )


@dataclass(frozen=True)
class VerificationReport:
    ok: bool
    mismatches: tuple

    def __bool__(self):
        return self.ok


def verify_certificate(cert, bundle=None, field=None) -> VerificationReport:
    """Rebuild the bundle from its provenance and recompute every entry."""
    if isinstance(cert, dict):
        cert = MCMCertificate.from_dict(cert)
    fld = field or field_from_name(cert.field)
    E = bundle if bundle is not None else bundle_from_provenance(cert.provenance, fld)
    extra = cert.positive_window[1] - max(0, regularity_bound(E) + E.n)
    trials = (cert.probe or {}).get("trials_requested", 16)
    fresh = mcm_vanishing_check(E, fld, trials=trials, extra=max(extra, 0))
    a, b = cert.to_dict(), fresh.to_dict()
    mismatches = []
    for key in ("n", "rank", "verdict", "windows", "evidence", "regularity", "witness"):
        if a[key] != b[key]:
            mismatches.append(key)
    if a["provenance"] != b["provenance"]:
        mismatches.append("provenance")
    return VerificationReport(not mismatches, tuple(mismatches))


# -- parameter arithmetic ------------------------------------------------------

def natural_cohomology_threshold(n: int, t: int, r: int) -> int:
    """Smallest k past which a general quotient O(-1)^{kt} -> O^{k(t+r)} has natural cohomology.

    With a = ceil(tn/r), b = floor(tn/r) the bound is
    max{ C(a+n-1,n)^2 C(a+n,n) / (4(t+r)),  C(b+n-1,n)^3 / (4t) };
    when n divides r, k = 1 already works.
    """
    if min(n, t, r) < 1:
        raise ValueError("n, t, r must be positive")
    if r % n == 0:
        return 1
    alpha = -(-t * n // r)
    beta = t * n // r
    v1 = Fraction(comb(alpha + n - 1, n) ** 2 * comb(alpha + n, n), 4 * (t + r))
    v2 = Fraction(comb(beta + n - 1, n) ** 3, 4 * t)
    bound = max(v1, v2)
    k = -(-bound.numerator // bound.denominator)
    return max(k, 1)


def _inside_cone(n, r, t):
    """r < t (n - 1 + sqrt(n^2 + 2n - 3)) / 2, decided in integers."""
    lhs = 2 * r - (n - 1) * t
    if lhs < 0:
        return True
    return lhs * lhs < t * t * (n * n + 2 * n - 3)


def admissible_parameters(n: int, r: int):
    """Largest t < r with r < t (n-1+sqrt(n^2+2n-3))/2, or None (also when r < n)."""
    if n < 2 or r < 1:
        raise ValueError("need n >= 2 and r >= 1")
    if r < n:
        return None
    for t in range(r - 1, 0, -1):
        if _inside_cone(n, r, t):
            return t
    return None


__all__ = [
    "SCHEMA",
    "MCMCertificate",
    "VerificationReport",
    "admissible_parameters",
    "dual_regularity_bound",
    "mcm_vanishing_check",
    "natural_cohomology_threshold",
    "regularity_bound",
    "verify_certificate",
]
