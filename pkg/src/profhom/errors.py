"""Exception hierarchy.

Every validation failure carries the witnesses that make it reproducible,
so callers (and the CLI) can report *why* an input was rejected.
"""


class ProfhomError(Exception):
    """Base class for all engine errors."""


class ValidationError(ProfhomError, ValueError):
    """An input object violates a structural axiom."""


class NotAssociative(ValidationError):
    def __init__(self, a: int, b: int, c: int):
        self.witness = (a, b, c)
        super().__init__(f"(a*b)*c != a*(b*c) for (a, b, c) = {self.witness}")


class NoIdentity(ValidationError):
    def __init__(self, detail: str = "element 0 is not a two-sided identity"):
        super().__init__(detail)


class NoInverse(ValidationError):
    def __init__(self, a: int):
        self.witness = a
        super().__init__(f"element {a} has no two-sided inverse")


class NotSubgroup(ValidationError):
    pass


class NotNormal(ValidationError):
    def __init__(self, g: int, n: int, conjugate: int):
        self.witness = (g, n, conjugate)
        super().__init__(
            f"g*n*g^-1 = {conjugate} leaves the kernel for g = {g}, n = {n}")


class NotHomomorphism(ValidationError):
    pass


class NotSurjective(ValidationError):
    pass


class ActionNotHomomorphic(ValidationError):
    def __init__(self, g: int, h: int):
        self.witness = (g, h)
        super().__init__(f"action(g)action(h) != action(gh) for (g, h) = {self.witness}")


class ActionNotInvertible(ValidationError):
    def __init__(self, g: int):
        self.witness = g
        super().__init__(f"action of element {g} is not an automorphism")


class ModuleNotFinite(ValidationError):
    pass


class GroupMismatch(ValidationError):
    pass


class DepthMismatch(ValidationError):
    pass


class NotEquivariant(ValidationError):
    def __init__(self, message: str, witness=None):
        self.witness = witness
        super().__init__(message)


class NotWellDefined(ValidationError):
    """A generator matrix does not respect the relations of its source."""


class NotCyclic(ValidationError):
    pass


class CompositionNonzero(ValidationError):
    pass


class NotStabilized(ValidationError):
    """A declared stabilization index is contradicted by a transition."""


class SizeOverflow(ProfhomError):
    def __init__(self, size: int, cap: int, where: str = ""):
        self.size, self.cap, self.where = size, cap, where
        suffix = f" ({where})" if where else ""
        super().__init__(f"size {size} exceeds cap {cap}{suffix}")


class Indeterminate(ProfhomError):
    """The truncation is too short to decide the requested quantity."""


class E2Mismatch(ProfhomError):
    """The two independent E_2 computations disagree."""


class CollapseViolation(ProfhomError):
    """Eilenberg-Mac Lane orbit homology disagrees with continuous homology."""


class SchemaError(ProfhomError):
    def __init__(self, path: str, reason: str):
        self.path, self.reason = path, reason
        super().__init__(f"{path}: {reason}")
