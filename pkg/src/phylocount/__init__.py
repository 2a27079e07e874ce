"""Exact and asymptotic counting of galled and reticulation-visible networks.

The package is organised around the component-graph decomposition of rooted
binary phylogenetic networks:

- ``series``    exact truncated EGFs and Laurent polynomials in sqrt(1-2z)
- ``onecomp``   one-component building-block counts and their series
- ``networks``  the network data model, class predicates, component graphs
- ``canon``     canonical forms and automorphism counts for small DAGs
- ``galled``    galled-network counts (series, closed forms, tree sums)
- ``retvis``    reticulation-visible counts via DAG-pattern sums
- ``oracle``    brute-force enumeration and the saturated-network analysis
- ``cli``       command-line interface
"""

from phylocount.series import Egf, SqrtPoly
from phylocount.networks import Network, VertexKind, ComponentGraph

__all__ = ["Egf", "SqrtPoly", "Network", "VertexKind", "ComponentGraph"]

__version__ = "0.1.0"
