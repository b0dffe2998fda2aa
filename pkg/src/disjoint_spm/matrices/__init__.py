"""S-permutation matrices, exhaustive oracles, cliques and Sudoku composition."""
from .core import (
    PiMatrix,
    SPermutationMatrix,
    enumerate_pi,
    fingerprint_words,
    is_disjoint,
    pi_to_sperm,
    sperm_to_pi,
    symbol_table,
)
from .disjointness import (
    DisjointnessGraph,
    build_disjointness_graph,
    count_cliques,
    iter_cliques,
    write_clique_list,
)
from .oracle import agreement_histogram, brute_force_disjoint_count, q_oracle
from .sudoku import (
    SudokuMatrix,
    compose_sudoku,
    decompose_sudoku,
    read_family,
    sample_disjoint_family,
    validate_sudoku,
    write_family,
)

__all__ = [
    "PiMatrix", "SPermutationMatrix", "enumerate_pi", "fingerprint_words", "is_disjoint",
    "pi_to_sperm", "sperm_to_pi", "symbol_table", "DisjointnessGraph",
    "build_disjointness_graph", "count_cliques", "iter_cliques", "write_clique_list",
    "agreement_histogram", "brute_force_disjoint_count", "q_oracle", "SudokuMatrix",
    "compose_sudoku", "decompose_sudoku", "read_family", "sample_disjoint_family",
    "validate_sudoku", "write_family",
]
