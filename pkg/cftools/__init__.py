"""
cftools
=======

cftools (Circuit Flattening Tools) is a Python package for reducing the depth
of arithmetic circuits. Circuits are read and written with the io module and
expanded into sparse polynomials with the polynomial module. The transform,
balance and depth4 modules implement homogenization, normalization,
multiplicative balancing and the flattening to depth 4, and the pipeline
module chains them. Equivalence is checked exactly or by evaluation over a
prime field with the field module. Lower-bound certificates for the
permanent and the determinant are computed by the bounds module, and test
circuits are produced by the generators module.
"""

__author__ = 'Henry Robbins'

from . import balance
from . import bounds
from . import depth4
from . import field
from . import generators
from . import pipeline
from . import polynomial
from . import transform
from .circuit import (Circuit, CircuitBuilder, Gate, GateDegree, GateKind,
                      count_parse_trees, enumerate_parse_trees, validate)
from .errors import CircuitError
from .io import Metadata, read, read_circuit, write_circuit
from .pipeline import reduce_to_depth4, run_passes
