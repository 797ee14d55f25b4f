"""Closed-form and numerical error-probability analysis."""
from .special import (EULER_GAMMA, bessel_k0, bessel_k1, digamma, double_factorial_ratio, exp1,
                      q_function, scaled_exp1, whittaker_w_mhalf_0, whittaker_w_mhalf_0_scaled)
from .upep import (Method, QuadratureError, UpepInputs, UpepValue, upep_correct,
                   upep_correct_asymptotic, upep_correct_integral, upep_correct_partial,
                   upep_correct_series, upep_correct_upper_bound, upep_wrong,
                   upep_wrong_asymptotic, upep_wrong_integral, upep_wrong_partial,
                   upep_wrong_series)
from .bounds import (ScanLimitExceeded, SeriesDivergenceError, abep_curve, abep_union_bound,
                     cpep_correct, cpep_wrong, crossover_lhs_correct, crossover_lhs_wrong,
                     crossover_min_L, crossover_upper_edge, diversity_order, eta_bar,
                     min_L_outperforming_ssm, pair_groups, product_channel_cdf,
                     product_channel_pdf, snr_at_target, snr_for_abep, ssm_upep_asymptotic,
                     ssm_upep_wrong_exact)
