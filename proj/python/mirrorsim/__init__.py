"""Exact-amplitude toolkit for the mirror semiquantum key distribution
protocol: honest-run enumeration, two photon-swap attacks, Monte Carlo,
and the statistical checks that expose (or fail to expose) them."""

from ._core import *  # noqa: F401,F403
