"""Linear temporal logic over action labels."""
from .omega import (Nbwa, OneWeakCheck, OneWeakFairAutomaton, lasso_member, lasso_sat,
                    one_weak_check, trim_one_weak)
from .syntax import (And, Finally, Formula, Globally, Lit, LtlSyntaxError, Next, Not, Or,
                     SFinally, SGlobally, Until, WeakUntil, classify, det_structure, is_fg,
                     letter_set, negate, nnf, parse, size, subformulas, to_text)
from .tableau import tableau
from .translate import FragmentError, fg_translate, neg_det_translate

nbwa_lasso_member = lasso_member
