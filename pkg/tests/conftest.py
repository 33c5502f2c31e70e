from fractions import Fraction

import pytest

from novikit import PeriodSystem, RingMode, monomial, unit, zero
from novikit.fields import GF2, QQ


@pytest.fixture
def axes():
    """Rank-2 lattice whose period pairs are just the coordinates."""
    return PeriodSystem(2, (1, 0), (0, 1))


@pytest.fixture
def ring(axes):
    """Convenience constructors over the axes system, interval mode, cutoff 10."""

    class Ring:
        system = axes
        field = GF2
        mode = RingMode.INTERVAL
        cutoff = Fraction(10)

        def mono(self, exponent, coeff=1, mode=None, field=None, cutoff=None):
            return monomial(self.system, field or self.field, mode or self.mode,
                            cutoff if cutoff is not None else self.cutoff,
                            exponent, coeff)

        def one(self, mode=None, field=None, cutoff=None):
            return unit(self.system, field or self.field, mode or self.mode,
                        cutoff if cutoff is not None else self.cutoff)

        def zero(self, mode=None, field=None, cutoff=None):
            return zero(self.system, field or self.field, mode or self.mode,
                        cutoff if cutoff is not None else self.cutoff)

    return Ring()
