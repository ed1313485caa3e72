"""Chain Tutte, chain Whitney rank and chain characteristic polynomials of matroids,
with brute-force oracles for coupled multicolorings and multicommodity flows."""

from .chains import (chain_char_from_mobius, chain_characteristic, chain_mobius,
                     chain_mobius_table, chain_tutte, flat_chains, mobius_poly,
                     split_chain_tutte, verify_identities, verify_recursion, verify_routes,
                     verify_sign_alternation, whitney_rank_poly)
from .enumeration import SubsetChain, chain_count, iter_chains
from .errors import (ChainPolyError, ContractViolation, HypothesisViolation, InvalidParameters,
                     LaurentError, SchemaError, SizeCapExceeded)
from .graph import Graph, complete_graph, cycle_graph, path_graph
from .graphlab import (AbelianGroup, count_coupled_colorings, count_coupled_flows,
                       coupled_chromatic_poly, coupled_flow_poly, is_coupled_coloring,
                       is_coupled_flow, parse_group, parse_groups)
from .matroid import (Matroid, closure, contract, delete, direct_sum, dual, flats,
                      make_graphic, make_table, make_uniform, matroid_from_json, restrict)
from .polyring import (MultiPoly, coefficients_by_total_degree, is_log_concave, is_unimodal,
                       parse_poly)
from .report import Report

__version__ = "0.1.0"

__all__ = [
    "AbelianGroup", "ChainPolyError", "ContractViolation", "Graph", "HypothesisViolation",
    "InvalidParameters", "LaurentError", "Matroid", "MultiPoly", "Report", "SchemaError",
    "SizeCapExceeded", "SubsetChain",
    "chain_char_from_mobius", "chain_characteristic", "chain_count", "chain_mobius",
    "chain_mobius_table", "chain_tutte", "closure", "coefficients_by_total_degree",
    "complete_graph", "contract", "count_coupled_colorings", "count_coupled_flows",
    "coupled_chromatic_poly", "coupled_flow_poly", "cycle_graph", "delete", "direct_sum",
    "dual", "flat_chains", "flats", "is_coupled_coloring", "is_coupled_flow",
    "is_log_concave", "is_unimodal", "iter_chains", "make_graphic", "make_table",
    "make_uniform", "matroid_from_json", "mobius_poly", "parse_group", "parse_groups",
    "parse_poly", "path_graph", "restrict", "split_chain_tutte", "verify_identities",
    "verify_recursion", "verify_routes", "verify_sign_alternation", "whitney_rank_poly",
]
