"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class IntegrationError(ArithmeticError):
    """The integrand produced a non-finite value at a quadrature node."""

    def __init__(self, node, value):
        self.node = node
        self.value = value
        super().__init__(f"non-finite integrand value {value!r} at node x={node!r}")


class ContractError(RuntimeError):
    """A numerical contract (e.g. normalization) was violated."""
