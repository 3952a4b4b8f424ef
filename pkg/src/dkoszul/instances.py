"""Built-in instance library: algebras with their expected Koszul degree d."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .algebra import GradedAlgebra, PathAlgebraPresentation, Quiver, build_path_algebra, build_truncated_algebra
from .scalar import Field

DEFAULT_FIELD = Field("prime", 32003)


def example_quiver() -> Quiver:
    return Quiver(("1", "2", "3"), (("alpha", "1", "1"), ("beta", "1", "2"), ("gamma", "2", "3")))


def example_presentation(field: Field = DEFAULT_FIELD) -> PathAlgebraPresentation:
    # alpha^3 and gamma.beta.alpha, paths in application order
    return PathAlgebraPresentation(example_quiver(),
                                   (((1, ("alpha", "alpha", "alpha")),),
                                    ((1, ("alpha", "beta", "gamma")),)),
                                   field)


def example_algebra(D: int = 6, field: Field = DEFAULT_FIELD) -> GradedAlgebra:
    return build_path_algebra(example_presentation(field), D, name="cubic-loop")


def truncated_polynomial(d: int, D: int = 8, field: Field = DEFAULT_FIELD) -> GradedAlgebra:
    q = Quiver(("v",), (("x", "v", "v"),))
    return build_truncated_algebra(q, d, max(D, d), field, name=f"k[x]/(x^{d})")


def two_loops(d: int = 3, D: int = 8, field: Field = DEFAULT_FIELD) -> GradedAlgebra:
    q = Quiver(("v",), (("x", "v", "v"), ("y", "v", "v")))
    return build_truncated_algebra(q, d, max(D, d), field, name=f"two-loops/J^{d}")


def three_cycle(d: int = 3, D: int = 8, field: Field = DEFAULT_FIELD) -> GradedAlgebra:
    q = Quiver(("1", "2", "3"), (("a", "1", "2"), ("b", "2", "3"), ("c", "3", "1")))
    return build_truncated_algebra(q, d, max(D, d), field, name=f"three-cycle/J^{d}")


def kronecker(d: int = 3, D: int = 8, field: Field = DEFAULT_FIELD) -> GradedAlgebra:
    q = Quiver(("1", "2"), (("a", "1", "2"), ("b", "1", "2")))
    return build_truncated_algebra(q, d, max(D, d), field, name=f"kronecker/J^{d}")


def polynomial_xy(D: int = 8, field: Field = DEFAULT_FIELD) -> GradedAlgebra:
    q = Quiver(("v",), (("x", "v", "v"), ("y", "v", "v")))
    p = PathAlgebraPresentation(q, (((1, ("y", "x")), (-1, ("x", "y"))),), field)
    return build_path_algebra(p, D, name="k[x,y]")


def all_paths(q: Quiver, length: int) -> list:
    """Every path of the given length, arrows in application order."""
    paths = [(name,) for name, _, _ in q.arrows]
    tgt = {name: t for name, _, t in q.arrows}
    for _ in range(length - 1):
        paths = [p + (name,) for p in paths for name, s, _ in q.arrows if tgt[p[-1]] == s]
    return paths


def truncated_presentation(q: Quiver, d: int, field: Field = DEFAULT_FIELD) -> PathAlgebraPresentation:
    return PathAlgebraPresentation(q, tuple(((1, p),) for p in all_paths(q, d)), field)


QUIVERS = {
    "one-loop": Quiver(("v",), (("x", "v", "v"),)),
    "two-loops": Quiver(("v",), (("x", "v", "v"), ("y", "v", "v"))),
    "three-cycle": Quiver(("1", "2", "3"), (("a", "1", "2"), ("b", "2", "3"), ("c", "3", "1"))),
    "kronecker": Quiver(("1", "2"), (("a", "1", "2"), ("b", "1", "2"))),
}


@dataclass(frozen=True)
class BuiltinInstance:
    name: str
    d: int
    koszul: bool  # whether the algebra is d-Koszul
    presentation: Callable[[Field], PathAlgebraPresentation]
    description: str

    def build(self, D: int, field: Field = DEFAULT_FIELD) -> GradedAlgebra:
        return build_path_algebra(self.presentation(field), max(D, self.d), name=self.name)


BUILTINS: dict[str, BuiltinInstance] = {}


def _register(inst: BuiltinInstance):
    BUILTINS[inst.name] = inst


def _kxy(field: Field) -> PathAlgebraPresentation:
    return PathAlgebraPresentation(QUIVERS["two-loops"], (((1, ("y", "x")), (-1, ("x", "y"))),), field)


_register(BuiltinInstance("cubic-loop", 3, False, example_presentation,
                          "three vertices, loop alpha, relations alpha^3 and gamma.beta.alpha"))
for _d in range(2, 6):
    _register(BuiltinInstance(f"trunc-poly-{_d}", _d, True,
                              (lambda dd: lambda F: truncated_presentation(QUIVERS["one-loop"], dd, F))(_d),
                              f"k[x]/(x^{_d})"))
for _q, _label in (("two-loops", "two loops"), ("three-cycle", "oriented 3-cycle"), ("kronecker", "2-Kronecker quiver")):
    _register(BuiltinInstance(f"{_q}-J3", 3, True,
                              (lambda qq: lambda F: truncated_presentation(QUIVERS[qq], 3, F))(_q),
                              f"{_label} modulo J^3"))
_register(BuiltinInstance("kxy", 2, True, _kxy, "commutative polynomial ring k[x,y]"))


def koszul_builtins() -> list[BuiltinInstance]:
    return [b for b in BUILTINS.values() if b.koszul]


def get_builtin(name: str) -> Optional[BuiltinInstance]:
    return BUILTINS.get(name)
