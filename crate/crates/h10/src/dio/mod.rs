//! Diophantine representations: formulas, elementary constraints, single
//! equations, and the formula toolbox used by the FRACTRAN reduction.

pub mod advanced;
pub mod elem;
pub mod logic;
pub mod single;

pub use advanced::{
    alpha_canonical_size, alpha_formula, alpha_system, expo_canonical_size, bounded_forall, bounded_forall_with, cipher_decode,
    cipher_encode, cipher_mask, cipher_mult_mask, cipher_ones, cipher_ones_shift, digitwise_and,
    digitwise_and_formula_with, dprm_pipeline, dprm_pipeline_with, expo_formula, expo_fun,
    fractran_halting_formula, fractran_halting_formula_with, fractran_step_formula,
    fractran_stop_formula, fun_cst_nat, godel_exp_formula, godel_exp_formula_with,
    is_digit_formula, is_digit_formula_with, masked_le_formula, masked_le_formula_with,
    rel_iter_formula_with, rt_closure_formula_with, table_pow, Cipher, CipherError, DprmOutput,
    PowBuilder,
};
pub use elem::{cstr_eval, cstrs_eval, form_to_elem, DioCstr, ElemRepr};
pub use logic::{
    df_eval_bounded, df_size, fun_cst, fun_mult, fun_plus, fun_rename, fun_var, rel_conj,
    rel_disj, rel_divides, rel_exists, rel_false, rel_fun_eq, rel_le, rel_lt, rel_ndivides,
    rel_ne, rel_rename, rel_true, DfOutcome, DioForm, Renaming, Valuation,
};
pub use single::{
    elem_to_single, finitize_vars, h10_to_h10z, h10z_eval, poly_eval, single_eval, DioPoly,
    DioSingle, ZPoly,
};
