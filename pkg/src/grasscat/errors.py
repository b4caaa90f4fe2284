"""Exception types shared across the library."""


class GrasscatError(Exception):
    """Base class for all library errors."""


class MismatchedAmbient(GrasscatError):
    """Two rims with different (k, n) were combined."""


class NotAlmostConsecutive(GrasscatError):
    """A rim-level syzygy or AR formula was asked for a rim that is not
    a union of two cyclic intervals with one singleton."""


class NotRankOne(GrasscatError):
    """Rank-1 identification was attempted on a representation that is not
    free of rank 1 at every vertex."""


class ProjectiveInput(GrasscatError):
    """Syzygy or orbit stepping was asked for a projective module, whose
    syzygy vanishes in the stable category."""


class TruncationUnstable(GrasscatError):
    """A t-adic computation did not stabilise under the working truncation;
    the caller should raise the truncation level and retry."""


class EmbeddingFailure(GrasscatError):
    """No monomial placement of the bottom layer inside the two-layer module
    yields a free cokernel.  Signals a construction bug for crossing pairs."""
