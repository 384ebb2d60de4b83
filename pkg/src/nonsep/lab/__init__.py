"""Executable checks of the covering and separation statements, plus numerical experiments."""
from .extremal import ExtremalSolution, best_valid, extremal_residual, kkt_residual, solve_extremal_system, summarize
from .lemmas import SandwichResult, WidthReport, cover_with_ratio_d, sandwich, verify_width_lemma
from .search import SearchResult, search_sup_lambda
from .suites import SUITES, CaseOutcome, SuiteReport, run_suite, verify
from .summand import KIPReport, StrictReport, check_summand, verify_kip_theorem, verify_strictly_convex

__all__ = [name for name in dir() if not name.startswith("_")]
