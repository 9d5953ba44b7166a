"""High-precision evaluation and verification of infinite products whose
exponents come from the Thue-Morse and Rudin-Shapiro digit sequences."""

from .errors import (CapabilityError, ConsistencyError, DigitprodError,
                     EvaluationError, InputError, ParseError)
from .evaluator import (EvalOptions, EvalResult, ProductSpec, eval_plain,
                        eval_pm_rs, eval_pm_thue, eval_product,
                        eval_zero_one_rs, eval_zero_one_thue, f_value,
                        flajolet_martin, g_value, monotonicity_scan,
                        remainder_sign_probe)
from .factored_rational import (AffineFactor, ConvergenceClass, ConvergenceTag,
                                FactoredRational, classify, dyadic_split,
                                log_term, pole_check, rs_split)
from .numerics import (ClosedForm, constant, eval_closed_form, gamma,
                       DEFAULT_PRECISION)
from .sequences import (ExponentKind, block_parity, exponent,
                        prefix_signed_sum, rudin_shapiro, thue_morse)
from .symbolic import (GExpression, Identity, ReduceResult, VerifyReport,
                       catalog, catalog_entry, expr_from_spec, family, reduce,
                       verify, verify_all)

__version__ = "0.1.0"

__all__ = [
    "AffineFactor", "CapabilityError", "ClosedForm", "ConsistencyError",
    "ConvergenceClass", "ConvergenceTag", "DEFAULT_PRECISION",
    "DigitprodError", "EvalOptions", "EvalResult", "EvaluationError",
    "ExponentKind", "FactoredRational", "GExpression", "Identity",
    "InputError", "ParseError", "ProductSpec", "ReduceResult",
    "VerifyReport", "block_parity", "catalog", "catalog_entry", "classify",
    "constant", "dyadic_split", "eval_closed_form", "eval_plain",
    "eval_pm_rs", "eval_pm_thue", "eval_product", "eval_zero_one_rs",
    "eval_zero_one_thue", "exponent", "expr_from_spec", "f_value", "family",
    "flajolet_martin", "g_value", "gamma", "log_term", "monotonicity_scan",
    "pole_check", "prefix_signed_sum", "reduce", "remainder_sign_probe",
    "rs_split", "rudin_shapiro", "thue_morse", "verify", "verify_all",
]
