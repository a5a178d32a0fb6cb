"""Exception types raised by the series engine."""


class QDurfeeError(Exception):
    """Base class for all engine errors."""


class RootNotInField(QDurfeeError):
    """A requested square root does not lie in Q(i)."""


class NonUnitLeadingCoefficient(QDurfeeError):
    """Series inversion needs a lowest coefficient that is a single monomial."""


class FractionalNegation(QDurfeeError):
    """q -> -q was requested on a series with non-integral exponents."""


class NegativePowerAtZero(QDurfeeError):
    """A parameter appearing with a negative power was set to zero."""


class BeyondTruncation(QDurfeeError):
    """A coefficient at or above the truncation order was requested."""


class DivergentProduct(QDurfeeError):
    """An infinite product whose factors never approach 1."""


class ZeroProduct(DivergentProduct):
    """A product containing an identically vanishing factor."""


class ZeroArgument(QDurfeeError):
    """Theta product form requested at a lattice point, where it vanishes."""


class PoleInSummand(QDurfeeError):
    """A summand of an Appell-Lerch sum has a vanishing denominator."""


class InexactDivision(QDurfeeError):
    """Exact polynomial division left a nonzero remainder."""


class UnknownIdentity(QDurfeeError):
    """The identity registry has no entry under the requested id."""
