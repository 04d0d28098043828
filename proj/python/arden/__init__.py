"""Alternating least-squares estimation of AR, VAR(1) and signature-NAR models."""

from ._arden import (
    ArdenError,
    FitResult,
    NarFitResult,
    NarModel,
    coefficients_from_roots,
    companion_eigenvalues,
    delay_embed,
    evaluate_loss,
    first_difference,
    fit_ar,
    fit_nar,
    fit_var1,
    inject_artefact,
    nar_one_step_mse,
    nar_predict_one_step,
    order_scan,
    param_step,
    parse_csv,
    run_experiment,
    signature,
    signature_dimension,
    simulate_ar,
    state_step,
)

__all__ = [
    "ArdenError",
    "FitResult",
    "NarFitResult",
    "NarModel",
    "coefficients_from_roots",
    "companion_eigenvalues",
    "delay_embed",
    "evaluate_loss",
    "first_difference",
    "fit_ar",
    "fit_nar",
    "fit_var1",
    "inject_artefact",
    "nar_one_step_mse",
    "nar_predict_one_step",
    "order_scan",
    "param_step",
    "parse_csv",
    "run_experiment",
    "signature",
    "signature_dimension",
    "simulate_ar",
    "state_step",
]
