import numpy as np
import pytest

from msrr import CodeParams, Codec

# Desk-scale codes used throughout the suite.
P1 = CodeParams(n_bar=4, u=2, u0=0, k_bar=2, d_bar=3)   # p=11, alpha=4
P2 = CodeParams(n_bar=4, u=3, u0=1, k_bar=2, d_bar=3)   # p=13, alpha=4
P3 = CodeParams(n_bar=6, u=2, u0=0, k_bar=3, d_bar=4)   # p=13, alpha=8
P1_DEGENERATE = CodeParams(n_bar=4, u=2, u0=0, k_bar=2, d_bar=2)  # s_bar=1


@pytest.fixture(scope="session")
def p1_codec():
    return Codec(P1)


@pytest.fixture(scope="session")
def p2_codec():
    return Codec(P2)


@pytest.fixture(scope="session")
def p3_codec():
    return Codec(P3)


@pytest.fixture(scope="session")
def degenerate_codec():
    return Codec(P1_DEGENERATE)


def random_stripe(codec, seed=0, stripes=None):
    """Random codeword(s): a Stripe, or raw vectors when stripes is given."""
    rng = np.random.default_rng(seed)
    shape = (codec.params.k, codec.params.alpha)
    if stripes is None:
        return codec.encode_systematic(rng.integers(0, codec.p, size=shape))
    return codec.encode_batch(rng.integers(0, codec.p, size=shape + (stripes,)))
