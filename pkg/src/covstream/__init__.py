"""Streaming set cover and covering-ILP toolkit: one-pass approximation and
estimation algorithms, exact desk-scale oracles, adversarial instance
generators, and an experiment harness."""

from .approx import CoverCertificate, merge_approx, merge_approx_ilp
from .estimator import (EstimateReport, MulticoverReport, TesterState, Verdict,
                        binarize, estimate_opt, estimate_opt_unknown_cmax,
                        guess_ladder, logical_space_bits, multicover_estimate,
                        space_breakdown, tester_finalize, tester_init,
                        tester_process)
from .hard_instances import (GENERATORS, HardInstance, gen_dapx, gen_ddet,
                             gen_dest, gen_dext, nearest_valid_params)
from .harness import (ExperimentConfig, StreamOrder, order_stream,
                      parse_config, run_experiment, write_report)
from .instances import (Assignment, ColumnEvent, CoveringInstance, SetSystem,
                        VariableKind, check_feasible, ilp_to_set_system,
                        objective_value, set_system_to_ilp)
from .io import ParseError, read_instance, write_instance
from .oracle import (CostTable, InfeasibleError, OracleLimitError,
                     cost_of_constraint, cost_of_instance, exact_opt,
                     exact_set_cover, streaming_cost)
from .sampling import (SamplingOutcome, sample_constraints, sampling_rate,
                       sampling_trials, verify_sampling_lemma)

__version__ = "0.1.0"
