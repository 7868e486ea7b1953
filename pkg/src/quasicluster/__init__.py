"""Exact symbolic engine for quasi-cluster algebras of non-orientable marked
surfaces: partitioned quivers, quasi-triangulations, the four local mutation
rules, exact Laurent arithmetic and exchange-graph enumeration."""

from .laurent import (Context, DenominatorVector, LaurentForm,
                      LaurentViolation, NotDivisible, Polynomial,
                      canonical_serialize, denominator_vector, laurent_arith,
                      laurent_div, poly_arith, poly_exact_div)
from .pquiver import (AmbiguousClosure, Arrow, ClassificationError,
                      PartitionedQuiver, Unclassifiable, Vertex,
                      VertexClassification)
from .surface import (InvalidTriangulation, NonTriangulable, NotFlippable,
                      QuasiTriangulation, SurfaceSignature, Triangle,
                      annulus_crosscap, arc_count,
                      euler_characteristic_nonorientable, mobius_fan,
                      mobius_three_arc, named_fixture, polygon_fan,
                      three_boundary)
from .algebra import (ExchangeGraph, LimitExceeded, Seed,
                      check_laurent_positive, explore, initial_seed,
                      mobius_variable_count, mutate_seed,
                      polygon_variable_count, unistructurality_scan)
from .cover import DoubleCover, QuasiArcPresent, double_quiver, lift

__all__ = [name for name in dir() if not name.startswith("_")]
