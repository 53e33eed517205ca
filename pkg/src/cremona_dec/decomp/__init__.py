"""Factorization algorithms for decomposition groups of rational plane curves."""
from .conic import (B_00, B_01, B_10, B_D, OrbitLabel, aut_conic_from_pgl2, conic, conjugation_relation,
                    contracts_tangent, express_quadratic_in_sigma, lambda_ab, mu_c, normalizer, orbit_classify,
                    pgl2_from_aut_conic, reach_orbit, sigma_ab, solve_c_for_a, solve_c_for_b, split_base_points)
from .demo import demo_cuspidal
from .lemmas import (PhiElement, ProductOracle, WordSearchOracle, dec_line_quadratic, default_phi_conic_cubic,
                     default_phi_line_conic, factor_dec_conic, factor_dec_cubic, lemma_b, lemma_b_conic,
                     lemma_b_cubic, lemma_c, lemma_c_conic, lemma_c_cubic, lift_factorization, line_model,
                     phi_conic_cubic, phi_conic_cubic_candidates, phi_line_conic, tangent_avoiding,
                     unavailable_oracle, validate_phi)
from .search import SEARCH_BOUND, choose_general_point, enumerate_points
from .words import (FactorStep, Factorization, absorb_linear, compose_word, inverse_word, load_certificate,
                    make_factorization, merge_linear, verify_factorization)
from .xd import (IsStandardUpToAut, NotInDec, cube_root_of_unity, cuspidal_aut, group_closure, nodal_aut_generators,
                 xd_aut, xd_curve, xd_quadratic_checker, xd_sigma, xd_tau)
