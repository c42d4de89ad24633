"""Random closed lambda terms and SKI combinators: counting, uniform sampling,
structural classification and strong-normalization checks."""

__version__ = "0.1.0"

from .terms import (  # noqa: E402
    Abs, App, Atom, CApp, CLTerm, I, K, LambdaTerm, OMEGA_CL, OMEGA_LAMBDA, ParseError, S,
    UnboundVariableError, Var, contains_subterm, contains_subterm_cl, is_closed, nodes,
    parse_cl, parse_lambda, print_cl, print_lambda, size_of, subtrees,
)
from .rewrite import (  # noqa: E402
    Budget, SNStatus, SNVerdict, beta_reducts, cl_reducts, decide_sn, decide_sn_cl,
    eta_longest, normal_order_step, substitute,
)
from .counting import (  # noqa: E402
    CountTable, count_cl, count_closed_lambda, count_lambda, enumerate_cl, enumerate_closed_lambda,
)
