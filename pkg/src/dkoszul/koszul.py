"""Degree templates and certificate-producing Koszul-type classifiers.

A classifier resolves the module, then scans the generator degrees of each
Q^i against a template set of allowed internal degrees.  Verdicts are only
claimed up to the homological bound H and the internal-degree range in which
the resolution data is complete.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Callable, Optional

from .algebra import GradedAlgebra
from .errors import BudgetError
from .gmod import INF, GradedModule, trivial_module
from .resolve import Resolution, minimal_resolution


def delta(i: int, d: int) -> int:
    """nd for i = 2n, nd + 1 for i = 2n + 1."""
    if i < 0 or d < 2:
        raise ValueError("need i >= 0 and d >= 2")
    n, odd = divmod(i, 2)
    return n * d + odd


def Delta(i: int, d: int) -> frozenset:
    """{nd} for i = 2n, {nd + 1, ..., nd + d - 1} for i = 2n + 1."""
    if i < 0 or d < 2:
        raise ValueError("need i >= 0 and d >= 2")
    n, odd = divmod(i, 2)
    if not odd:
        return frozenset({n * d})
    return frozenset(range(n * d + 1, n * d + d))


PROPERTIES = ("d-koszul", "generalized-d-koszul", "koszul-linear")


@dataclass
class KoszulCertificate:
    property: str
    d: int
    verdict: str  # "holds-up-to" or "fails"
    H: int
    D: object  # internal degree up to which generators were inspected
    field: str
    witness: Optional[tuple] = None  # (i, vertex, degree)
    generators: dict = dc_field(default_factory=dict)  # i -> list of (vertex, degree)
    vertex_names: tuple = ()

    @property
    def holds(self) -> bool:
        return self.verdict == "holds-up-to"

    def to_dict(self) -> dict:
        names = self.vertex_names

        def vname(v):
            return names[v] if names else v

        return {
            "property": self.property,
            "d": self.d,
            "verdict": self.verdict,
            "H": self.H,
            "D": None if self.D == INF else self.D,
            "field": self.field,
            "witness": None if self.witness is None else
            {"i": self.witness[0], "vertex": vname(self.witness[1]), "degree": self.witness[2]},
            "generators": {str(i): [[vname(v), s] for v, s in g] for i, g in sorted(self.generators.items())},
        }

    def describe(self) -> str:
        bound = "inf" if self.D == INF else self.D
        head = f"{self.property} (d={self.d}): {self.verdict} H={self.H} D={bound} over {self.field}"
        if self.witness:
            i, v, s = self.witness
            vn = self.vertex_names[v] if self.vertex_names else v
            head += f"; witness generator at i={i}, vertex {vn}, degree {s}"
        return head


def _scan(res: Resolution, H: int, template: Callable[[int], frozenset], prop: str, d: int) -> KoszulCertificate:
    res.extend(H)
    A = res.algebra
    gens = {}
    inspected = INF
    for i in range(H + 1):
        g = res.generators(i)
        gens[i] = g
        allowed = template(i)
        bad = sorted((s, v) for v, s in g if s not in allowed)
        if bad:
            s, v = bad[0]
            return KoszulCertificate(prop, d, "fails", H, min(inspected, res.ceilings[i]), str(res.field),
                                     (i, v, s), gens, A.vertex_names)
        c = res.ceilings[i]
        if c < max(allowed):
            raise BudgetError(f"generators of Q^{i} known only up to degree {c}, template needs {max(allowed)}",
                              degree=max(allowed))
        inspected = min(inspected, c)
    return KoszulCertificate(prop, d, "holds-up-to", H, inspected, str(res.field), None, gens, A.vertex_names)


def _resolve(m: GradedModule, H: int, res: Optional[Resolution]) -> Resolution:
    return res if res is not None else minimal_resolution(m, H)


def is_d_koszul(m: GradedModule, d: int, H: int, res: Optional[Resolution] = None) -> KoszulCertificate:
    return _scan(_resolve(m, H, res), H, lambda i: frozenset({delta(i, d)}), "d-koszul", d)


def is_generalized_d_koszul(m: GradedModule, d: int, H: int, res: Optional[Resolution] = None) -> KoszulCertificate:
    return _scan(_resolve(m, H, res), H, lambda i: Delta(i, d), "generalized-d-koszul", d)


def is_d_koszul_algebra(a: GradedAlgebra, d: int, H: int) -> KoszulCertificate:
    return is_d_koszul(trivial_module(a), d, H)


def is_koszul_module(m: GradedModule, H: int, res: Optional[Resolution] = None) -> KoszulCertificate:
    return _scan(_resolve(m, H, res), H, lambda i: frozenset({i}), "koszul-linear", 2)


def ext_concentration_table(m_or_res, H: int) -> dict:
    """(i, j) -> dim Ext^i(M, A_0)_j, read from the generators of a minimal resolution."""
    res = m_or_res if isinstance(m_or_res, Resolution) else minimal_resolution(m_or_res, H)
    if not res.minimal:
        raise ValueError("the table is read from a minimal resolution")
    res.extend(H)
    table: dict = {}
    for i in range(H + 1):
        for _, s in res.generators(i):
            table[(i, s)] = table.get((i, s), 0) + 1
    return table


def classify_from_table(table: dict, H: int, template: Callable[[int], frozenset]) -> Optional[tuple]:
    """Least (i, j) with a nonzero Ext entry outside the template, or None."""
    bad = sorted((i, j) for (i, j), c in table.items() if c and i <= H and j not in template(i))
    return bad[0] if bad else None
