"""logicrbm: compile propositional knowledge bases into restricted
Boltzmann machines whose minimised energy tracks weighted satisfiability,
then reason over, train, and extract rules from the resulting networks."""

from .errors import ParseError, SizeLimitError
from .formula import (
    Assignment, KnowledgeBase, PropositionTable,
    evaluate, format_formula, load_kb, parse_formula, parse_kb,
    weighted_sat,
)
from .normal_forms import (
    ConjunctiveClause, Dnf, dnf_to_sdnf, implication_to_sdnf, to_full_dnf,
)
from .rbm import (
    Rbm, energy, energy_rank, free_energy, gibbs_step, load_model,
    p_hidden_given_visible, p_visible_given_hidden, partition_brute,
    save_model,
)
from .compiler import (
    ClauseBase, CompileOptions, WeightedClause, attach_hidden_units,
    compile_implication, compile_kb, compile_penalty_horn, compile_sdnf,
    compile_universal, merge_clauses,
)
from .reasoner import (
    DeterministicConfig, GibbsConfig, Query, brute_force_maxsat,
    infer_conditional, infer_deterministic, infer_gibbs, verify_equivalence,
)
from .trainer import (
    Dataset, TrainConfig, cd_gradient, dataset_from_kb,
    discriminative_gradient, train,
)
from .extractor import ExtractedClause, extract_clauses, reliability_ratio

__version__ = "0.1.0"
