"""Exception hierarchy.

Three failure classes matter to callers (and to the CLI's exit codes):
input validation (2), search bounds (3), and internal invariant breaches (4).
"""

from __future__ import annotations


class LattmarkError(Exception):
    """Base class for all package errors."""


class InputError(LattmarkError):
    """A supplied value violates a documented precondition."""

    exit_code = 2


class BoundError(LattmarkError):
    """A configured enumeration or search bound was exceeded."""

    exit_code = 3


class InvariantError(LattmarkError):
    """A guaranteed internal property failed; indicates a construction bug."""

    exit_code = 4


class NotReflexive(InputError):
    def __init__(self, element):
        self.element = element
        super().__init__(f"relation is not reflexive at {element!r}")


class NotAntisymmetric(InputError):
    def __init__(self, x, y):
        self.witness = (x, y)
        super().__init__(f"relation is not antisymmetric: {x!r} and {y!r} are mutually related")


class NotTransitive(InputError):
    def __init__(self, x, y, z):
        self.witness = (x, y, z)
        super().__init__(f"relation is not transitive on ({x!r}, {y!r}, {z!r})")


class NotALattice(InputError):
    def __init__(self, x, y, bounds, kind="upper"):
        self.witness = (x, y)
        self.bounds = tuple(sorted(bounds))
        super().__init__(
            f"pair ({x!r}, {y!r}) has no unique least {kind} bound; minimal candidates: {self.bounds}"
        )


class EnumerationBoundExceeded(BoundError):
    def __init__(self, size, bound):
        self.size = size
        self.bound = bound
        super().__init__(f"poset has {size} elements, enumeration bound is {bound}")


class SearchBoundExceeded(BoundError):
    def __init__(self, explored, bound):
        self.explored = explored
        self.bound = bound
        super().__init__(f"stable-matching search explored {explored} nodes, bound is {bound}")


class NonConvergence(BoundError):
    def __init__(self, rounds, detail=None):
        self.rounds = rounds
        super().__init__(
            detail
            or f"deferred acceptance did not settle within {rounds} rounds; "
            "input choice functions are likely not path-independent"
        )


class UnknownElementId(InputError):
    def __init__(self, element):
        self.element = element
        super().__init__(f"unknown element id {element!r}")


class UnknownPartnerId(InputError):
    def __init__(self, agent, partner):
        self.agent = agent
        self.partner = partner
        super().__init__(f"{partner!r} is not a declared partner for agent {agent!r}")


class DuplicateId(InputError):
    def __init__(self, element):
        self.element = element
        super().__init__(f"duplicate id {element!r}")


class AlphaArgumentsComparable(InputError):
    def __init__(self, x, y):
        self.witness = (x, y)
        super().__init__(f"alpha arguments {x!r} and {y!r} are comparable; an antichain is required")


class ArgumentsNotAntichain(AlphaArgumentsComparable):
    pass


class OverlappingRotationAgents(InputError):
    def __init__(self, rot1, rot2, shared):
        self.witness = (rot1, rot2, tuple(sorted(shared)))
        super().__init__(f"rotations {rot1!r} and {rot2!r} share agents {sorted(shared)}")


class SpecError(InputError):
    """A choice-function spec or market violates a structural invariant."""


class NotLowerClosed(InputError):
    def __init__(self, member, missing):
        self.witness = (member, missing)
        super().__init__(f"set contains {member!r} but not its predecessor {missing!r}")


class NotRepresentable(InvariantError):
    def __init__(self, detail):
        super().__init__(f"matching is not representable by a rotation set: {detail}")


class ProjectionNotStable(InvariantError):
    def __init__(self, detail):
        super().__init__(f"projected matching is not stable in the base market: {detail}")


class NonLatticeStructure(InvariantError):
    def __init__(self, detail):
        super().__init__(f"stable matchings do not carry the expected lattice structure: {detail}")


class IsomorphismFailure(InvariantError):
    def __init__(self, detail):
        super().__init__(f"synthesized market failed the order-isomorphism check: {detail}")
