"""Entrywise sign-preserver laboratory for Hermitian matrices."""

from .domains import (COMPLEX_PLANE, NONNEG_REALS, POSITIVE_REALS, REAL_LINE, DomainSpec, annulus,
                      parse_domain, sample_hermitian)
from .errors import SignLabError
from .finite_field import FqField, enumerate_sign_preservers, frobenius_orbit
from .graph_verifier import find_graph_counterexample, verify_graph_preserver
from .graphs import GraphSpec, girth, induced_subgraph, is_tree, shortest_induced_cycle
from .numeric import (HermitianMatrix, leading_principal_minors, loewner_compare, positivity_verdict,
                      schur_complement)
from .reports import replay
from .transforms import (apply_entrywise, apply_entrywise_graph, build_irregular_preserver,
                         fh_exponent_status, fn_from_spec, parse_fn, power_sign, scaled_conjugate,
                         scaled_identity)
from .verifier import (check_injective_variant, check_monotone_preserver, classify_preserver,
                       find_counterexample, verify_sign_preserver)

__version__ = "0.1.0"
