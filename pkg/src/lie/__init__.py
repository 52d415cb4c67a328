"""Matrix Lie algebras, exponentials, invariance checks and the so(k) Killing form"""
from src.lie.algebra import MatrixLieAlgebra, SubalgebraCheck, bracket, is_subalgebra
from src.lie.exponential import adjoint, adjoint_exp, expm, expm_exact
from src.lie.invariance import InvarianceReport, ad_invariance_check
from src.lie.killing import killing_form_so, trace_form
