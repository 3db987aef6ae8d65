"""Constructing high-dimensional expanders by local lifts.

A local lift doubles every vertex of a pure simplicial complex and keeps,
on the top level, only the copies whose signs multiply to a chosen value.
The codimension-2 links become graph 2-lifts of the base links, so a good
signing makes the lifted complex a two-sided expander with the same top
degree.  Two engines choose signings (seeded Moser-Tardos resampling and
an exact conditional-expectations pass) and :mod:`hdxlift.verifier`
checks every result from scratch.
"""

__version__ = "0.1.0"

from .complex import LinkView, RegularityProfile, SimplicialComplex, build_from_top_faces, complete_complex
from .derand import DerandParams, DerandState, expected_Q, expected_Y, expected_Z, greedy_derand_lift
from . import errors
from .errors import HDXError
from .graph import Graph, complete_graph, cycle_graph
from .kernels import BACKEND
from .lifting import Signing, graph_induced_lift, local_lift, spectrum_union_check
from .lll import LLLConfig, LiftStats, NicenessReport, is_nice, moser_tardos_lift, random_lift_signing
from .spectral import (
    SPECTRAL_TOL,
    SparsenessWitness,
    SpectrumReport,
    is_sparse,
    signed_walk_operator,
    spectral_norm,
    spectrum,
    walk_operator,
)
from .verifier import HDXCertificate, LiftReport, certify_family, certify_hdx, verify_lift_laws

__all__ = [
    "BACKEND",
    "DerandParams",
    "DerandState",
    "Graph",
    "HDXCertificate",
    "HDXError",
    "LLLConfig",
    "LiftReport",
    "LiftStats",
    "LinkView",
    "NicenessReport",
    "RegularityProfile",
    "SPECTRAL_TOL",
    "Signing",
    "SimplicialComplex",
    "SparsenessWitness",
    "SpectrumReport",
    "build_from_top_faces",
    "certify_family",
    "certify_hdx",
    "complete_complex",
    "complete_graph",
    "cycle_graph",
    "errors",
    "expected_Q",
    "expected_Y",
    "expected_Z",
    "graph_induced_lift",
    "greedy_derand_lift",
    "is_nice",
    "is_sparse",
    "local_lift",
    "moser_tardos_lift",
    "random_lift_signing",
    "signed_walk_operator",
    "spectral_norm",
    "spectrum",
    "spectrum_union_check",
    "verify_lift_laws",
    "walk_operator",
]
