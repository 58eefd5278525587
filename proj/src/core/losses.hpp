#pragma once

#include "model.hpp"

namespace advae {

// Every term is sum over feature/latent dims, mean over the batch.
struct LossBreakdown {
    double mse = 0.0;
    double kld_prior = 0.0;
    double l_T = 0.0;
    double l_Gz = 0.0;
    double l_GzT = 0.0;
    double l_G = 0.0;
    double l_E = 0.0;

    bool all_finite() const;
};

double loss_mse(const Matrix& x, const Matrix& x_hat);
// d(loss_mse)/d(x_hat), scaled.
Matrix mse_grad(const Matrix& x, const Matrix& x_hat, double scale);

double loss_kld_prior(const GaussianParams& gp);
double loss_kld_gauss(const GaussianParams& gp, const GaussianParams& gp_t);

// max(0, margin - value)
double hinge(double margin, double value);

// --- log-variance-space forms used by backprop ---

double kld_prior_lv(const Matrix& mu, const Matrix& logvar);
// Adds scale * d(kld)/d{mu, logvar} into the given grads.
void kld_prior_lv_backward(const Matrix& mu, const Matrix& logvar, double scale,
                           Matrix& dmu, Matrix& dlogvar);

double kld_gauss_lv(const Matrix& mu, const Matrix& logvar, const Matrix& mu_t, const Matrix& logvar_t);
// Gradients w.r.t. the second (transformed) Gaussian only; the first is a
// constant in step one.
void kld_gauss_lv_backward_second(const Matrix& mu, const Matrix& logvar, const Matrix& mu_t,
                                  const Matrix& logvar_t, double scale, Matrix& dmu_t, Matrix& dlogvar_t);

// dL/d{mu, logvar} contribution of z = mu + exp(logvar/2) (.) eps given dL/dz.
void sampler_backward(const Matrix& dz, const Matrix& eps, const Matrix& sigma,
                      Matrix& dmu, Matrix& dlogvar);

// --- spec-level composite losses ---

// Generator objective for fixed latent draws z, z_T (Eq. 6-8 shape). When
// with_grad, accumulates into generator parameters only; encoder passes are
// flow-through.
LossBreakdown loss_generator(AdvaeModel& model, const Matrix& x, const Matrix& z, const Matrix& z_T,
                             bool with_grad = false);

// Encoder objective with x_r, x_Tr supplied as detached reconstructions.
// When with_grad, accumulates into encoder parameters only.
LossBreakdown loss_encoder(AdvaeModel& model, const Matrix& x, const Matrix& x_r, const Matrix& x_Tr,
                           bool with_grad = false);

// --- training-step losses (Algorithm flow; gradients per freeze/detach rules) ---

struct StepOneData {
    Matrix x;
    Matrix eps_z;  // batch x latent
    Matrix eps_zT; // batch x latent
    // Filled by step_one_loss for reuse in step two:
    Matrix z;
    Matrix z_T;
};

// Updates nothing itself; accumulates grads into {G, T} when with_grad.
LossBreakdown step_one_loss(AdvaeModel& model, StepOneData& data, bool with_grad);

struct StepTwoData {
    Matrix x;
    Matrix eps_z; // same draw as step one
    Matrix z_T;   // step-one sample, reused as a constant
};

// Accumulates grads into encoder parameters only when with_grad. The
// reconstruction term follows the algorithm's data flow: x_r = G(z) with
// z = mu + sigma (.) eps re-expressed through the current encoder pass, G
// frozen; the hinge inputs are detached.
LossBreakdown step_two_loss(AdvaeModel& model, const StepTwoData& data, bool with_grad);

// vae: MSE + lambda * KLD through the reparameterized draw; ae: MSE with
// z = mu. Accumulates into encoder and generator when with_grad.
LossBreakdown single_step_loss(AdvaeModel& model, const Matrix& x, const Matrix& eps_z, bool with_grad);

// Spec-level dispatch: evaluates the variant's objective(s) on one batch
// without touching gradients.
LossBreakdown loss_variant(AdvaeModel& model, const Matrix& batch, RngStream& rng);

} // namespace advae
