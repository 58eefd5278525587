#include "losses.hpp"

#include <cmath>

namespace advae {

bool LossBreakdown::all_finite() const {
    return std::isfinite(mse) && std::isfinite(kld_prior) && std::isfinite(l_T) &&
           std::isfinite(l_Gz) && std::isfinite(l_GzT) && std::isfinite(l_G) && std::isfinite(l_E);
}

double loss_mse(const Matrix& x, const Matrix& x_hat) {
    require_same_shape(x, x_hat, "loss_mse");
    if (x.rows() == 0) return 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x.at_flat(i) - x_hat.at_flat(i);
        total += d * d;
    }
    return total / static_cast<double>(x.rows());
}

Matrix mse_grad(const Matrix& x, const Matrix& x_hat, double scale) {
    require_same_shape(x, x_hat, "mse_grad");
    const double f = 2.0 * scale / static_cast<double>(x.rows());
    Matrix g(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.size(); ++i)
        g.at_flat(i) = f * (x_hat.at_flat(i) - x.at_flat(i));
    return g;
}

static void require_positive_sigma(const Matrix& sigma, const char* what) {
    for (std::size_t i = 0; i < sigma.size(); ++i)
        if (!(sigma.at_flat(i) > 0.0))
            throw DataError(std::string(what) + ": sigma must be strictly positive");
}

double loss_kld_prior(const GaussianParams& gp) {
    require_same_shape(gp.mu, gp.sigma, "loss_kld_prior");
    require_positive_sigma(gp.sigma, "loss_kld_prior");
    if (gp.mu.rows() == 0) return 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < gp.mu.size(); ++i) {
        const double mu = gp.mu.at_flat(i);
        const double var = gp.sigma.at_flat(i) * gp.sigma.at_flat(i);
        total += -0.5 * (1.0 + std::log(var) - mu * mu - var);
    }
    return total / static_cast<double>(gp.mu.rows());
}

double loss_kld_gauss(const GaussianParams& gp, const GaussianParams& gp_t) {
    require_same_shape(gp.mu, gp_t.mu, "loss_kld_gauss");
    require_same_shape(gp.mu, gp.sigma, "loss_kld_gauss");
    require_same_shape(gp_t.mu, gp_t.sigma, "loss_kld_gauss");
    require_positive_sigma(gp.sigma, "loss_kld_gauss");
    require_positive_sigma(gp_t.sigma, "loss_kld_gauss");
    if (gp.mu.rows() == 0) return 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < gp.mu.size(); ++i) {
        const double s = gp.sigma.at_flat(i);
        const double st = gp_t.sigma.at_flat(i);
        const double dmu = gp.mu.at_flat(i) - gp_t.mu.at_flat(i);
        total += std::log(st / s) + (s * s + dmu * dmu) / (2.0 * st * st) - 0.5;
    }
    return total / static_cast<double>(gp.mu.rows());
}

double hinge(double margin, double value) {
    const double h = margin - value;
    return h > 0.0 ? h : 0.0;
}

double kld_prior_lv(const Matrix& mu, const Matrix& logvar) {
    require_same_shape(mu, logvar, "kld_prior_lv");
    if (mu.rows() == 0) return 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        const double m = mu.at_flat(i);
        const double lv = logvar.at_flat(i);
        total += -0.5 * (1.0 + lv - m * m - std::exp(lv));
    }
    return total / static_cast<double>(mu.rows());
}

void kld_prior_lv_backward(const Matrix& mu, const Matrix& logvar, double scale,
                           Matrix& dmu, Matrix& dlogvar) {
    const double inv_n = scale / static_cast<double>(mu.rows());
    for (std::size_t i = 0; i < mu.size(); ++i) {
        dmu.at_flat(i) += inv_n * mu.at_flat(i);
        dlogvar.at_flat(i) += inv_n * 0.5 * (std::exp(logvar.at_flat(i)) - 1.0);
    }
}

double kld_gauss_lv(const Matrix& mu, const Matrix& logvar, const Matrix& mu_t, const Matrix& logvar_t) {
    require_same_shape(mu, mu_t, "kld_gauss_lv");
    if (mu.rows() == 0) return 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        const double lv = logvar.at_flat(i);
        const double lvt = logvar_t.at_flat(i);
        const double dm = mu.at_flat(i) - mu_t.at_flat(i);
        total += 0.5 * (lvt - lv) + (std::exp(lv) + dm * dm) / (2.0 * std::exp(lvt)) - 0.5;
    }
    return total / static_cast<double>(mu.rows());
}

void kld_gauss_lv_backward_second(const Matrix& mu, const Matrix& logvar, const Matrix& mu_t,
                                  const Matrix& logvar_t, double scale, Matrix& dmu_t, Matrix& dlogvar_t) {
    const double inv_n = scale / static_cast<double>(mu.rows());
    for (std::size_t i = 0; i < mu.size(); ++i) {
        const double var_t = std::exp(logvar_t.at_flat(i));
        const double dm = mu.at_flat(i) - mu_t.at_flat(i);
        dmu_t.at_flat(i) += inv_n * (-dm / var_t);
        dlogvar_t.at_flat(i) += inv_n * (0.5 - (std::exp(logvar.at_flat(i)) + dm * dm) / (2.0 * var_t));
    }
}

void sampler_backward(const Matrix& dz, const Matrix& eps, const Matrix& sigma,
                      Matrix& dmu, Matrix& dlogvar) {
    for (std::size_t i = 0; i < dz.size(); ++i) {
        dmu.at_flat(i) += dz.at_flat(i);
        dlogvar.at_flat(i) += dz.at_flat(i) * eps.at_flat(i) * 0.5 * sigma.at_flat(i);
    }
}

static Matrix reparam_fixed(const Matrix& mu, const Matrix& sigma, const Matrix& eps) {
    Matrix z = mu;
    for (std::size_t i = 0; i < z.size(); ++i) z.at_flat(i) += sigma.at_flat(i) * eps.at_flat(i);
    return z;
}

LossBreakdown loss_generator(AdvaeModel& model, const Matrix& x, const Matrix& z, const Matrix& z_T,
                             bool with_grad) {
    const Hyperparams& hp = model.hyper;
    ForwardCache cache_gz, cache_gzt, cache_er, cache_etr;
    Matrix x_r = model.generator.forward(z, cache_gz);
    Matrix x_Tr = model.generator.forward(z_T, cache_gzt);
    auto [mu_r, lv_r] = model.encoder.forward2(x_r, cache_er);
    auto [mu_tr, lv_tr] = model.encoder.forward2(x_Tr, cache_etr);

    LossBreakdown out;
    out.mse = loss_mse(x, x_r);
    const double kld_r = kld_prior_lv(mu_r, lv_r);
    const double mse_between = loss_mse(x_r, x_Tr);
    const double kld_tr = kld_prior_lv(mu_tr, lv_tr);
    out.l_Gz = out.mse + hp.gamma * kld_r;
    out.l_GzT = hinge(hp.margin_mse, mse_between) + hp.gamma * hinge(hp.margin_kld, kld_tr);
    out.l_G = out.l_Gz + out.l_GzT;

    if (with_grad) {
        const double n = static_cast<double>(x.rows());
        // Flow-through encoder passes: dL/dx_r, dL/dx_Tr from the KLD terms.
        Matrix dmu_r(mu_r.rows(), mu_r.cols()), dlv_r(mu_r.rows(), mu_r.cols());
        kld_prior_lv_backward(mu_r, lv_r, hp.gamma, dmu_r, dlv_r);
        Matrix g_xr = model.encoder.backward(cache_er, {dmu_r, dlv_r}, false);

        Matrix g_xtr(x_Tr.rows(), x_Tr.cols());
        if (kld_tr < hp.margin_kld) {
            Matrix dmu_tr(mu_tr.rows(), mu_tr.cols()), dlv_tr(mu_tr.rows(), mu_tr.cols());
            kld_prior_lv_backward(mu_tr, lv_tr, -hp.gamma, dmu_tr, dlv_tr);
            g_xtr = model.encoder.backward(cache_etr, {dmu_tr, dlv_tr}, false);
        }

        g_xr += mse_grad(x, x_r, 1.0);
        if (mse_between < hp.margin_mse) {
            const double f = -2.0 / n;
            for (std::size_t i = 0; i < g_xr.size(); ++i) {
                const double diff = x_r.at_flat(i) - x_Tr.at_flat(i);
                g_xr.at_flat(i) += f * diff;
                g_xtr.at_flat(i) -= f * diff;
            }
        }
        model.generator.backward(cache_gz, g_xr, true);
        model.generator.backward(cache_gzt, g_xtr, true);
    }
    return out;
}

LossBreakdown loss_encoder(AdvaeModel& model, const Matrix& x, const Matrix& x_r, const Matrix& x_Tr,
                           bool with_grad) {
    const Hyperparams& hp = model.hyper;
    ForwardCache cache_ex, cache_er, cache_etr;
    auto [mu, lv] = model.encoder.forward2(x, cache_ex);
    auto [mu_r, lv_r] = model.encoder.forward2(x_r, cache_er);
    auto [mu_tr, lv_tr] = model.encoder.forward2(x_Tr, cache_etr);

    LossBreakdown out;
    out.mse = loss_mse(x, x_r);
    out.kld_prior = kld_prior_lv(mu, lv);
    const double kld_r = kld_prior_lv(mu_r, lv_r);
    const double kld_tr = kld_prior_lv(mu_tr, lv_tr);
    out.l_E = out.mse + hp.lambda * out.kld_prior + hp.gamma * hinge(hp.margin_kld, kld_r) +
              hp.gamma * hinge(hp.margin_kld, kld_tr);

    if (with_grad) {
        Matrix dmu(mu.rows(), mu.cols()), dlv(mu.rows(), mu.cols());
        kld_prior_lv_backward(mu, lv, hp.lambda, dmu, dlv);
        model.encoder.backward(cache_ex, {dmu, dlv}, true);
        if (kld_r < hp.margin_kld) {
            Matrix dmu_r(mu_r.rows(), mu_r.cols()), dlv_r(mu_r.rows(), mu_r.cols());
            kld_prior_lv_backward(mu_r, lv_r, -hp.gamma, dmu_r, dlv_r);
            model.encoder.backward(cache_er, {dmu_r, dlv_r}, true);
        }
        if (kld_tr < hp.margin_kld) {
            Matrix dmu_tr(mu_tr.rows(), mu_tr.cols()), dlv_tr(mu_tr.rows(), mu_tr.cols());
            kld_prior_lv_backward(mu_tr, lv_tr, -hp.gamma, dmu_tr, dlv_tr);
            model.encoder.backward(cache_etr, {dmu_tr, dlv_tr}, true);
        }
    }
    return out;
}

LossBreakdown step_one_loss(AdvaeModel& model, StepOneData& data, bool with_grad) {
    const Hyperparams& hp = model.hyper;
    const bool generator_discriminates = model.variant != Variant::e_advae;

    // Encoder is frozen here: its outputs are constants.
    auto [mu, lv] = model.encoder.infer2(data.x);
    Matrix sigma = lv;
    for (std::size_t i = 0; i < sigma.size(); ++i) sigma.at_flat(i) = std::exp(0.5 * sigma.at_flat(i));

    ForwardCache cache_t;
    auto [mu_t, lv_t] = model.transformer.forward2(hconcat(mu, sigma), cache_t);
    Matrix sigma_t = lv_t;
    for (std::size_t i = 0; i < sigma_t.size(); ++i) sigma_t.at_flat(i) = std::exp(0.5 * sigma_t.at_flat(i));

    data.z = reparam_fixed(mu, sigma, data.eps_z);
    data.z_T = reparam_fixed(mu_t, sigma_t, data.eps_zT);

    ForwardCache cache_gz, cache_gzt, cache_er, cache_etr;
    Matrix x_r = model.generator.forward(data.z, cache_gz);
    Matrix x_Tr = model.generator.forward(data.z_T, cache_gzt);
    auto [mu_r, lv_r] = model.encoder.forward2(x_r, cache_er);

    LossBreakdown out;
    out.mse = loss_mse(data.x, x_r);
    const double kld_r = kld_prior_lv(mu_r, lv_r);
    out.l_Gz = out.mse + hp.gamma * kld_r;
    out.l_T = kld_gauss_lv(mu, lv, mu_t, lv_t);

    double mse_between = 0.0, kld_tr = 0.0;
    Matrix mu_tr, lv_tr;
    if (generator_discriminates) {
        auto tr = model.encoder.forward2(x_Tr, cache_etr);
        mu_tr = std::move(tr.first);
        lv_tr = std::move(tr.second);
        mse_between = loss_mse(x_r, x_Tr);
        kld_tr = kld_prior_lv(mu_tr, lv_tr);
        out.l_GzT = hinge(hp.margin_mse, mse_between) + hp.gamma * hinge(hp.margin_kld, kld_tr);
    }
    out.l_G = out.l_Gz + out.l_GzT;

    if (with_grad) {
        const double n = static_cast<double>(data.x.rows());

        Matrix dmu_r(mu_r.rows(), mu_r.cols()), dlv_r(mu_r.rows(), mu_r.cols());
        kld_prior_lv_backward(mu_r, lv_r, hp.gamma, dmu_r, dlv_r);
        Matrix g_xr = model.encoder.backward(cache_er, {dmu_r, dlv_r}, false);
        g_xr += mse_grad(data.x, x_r, 1.0);

        Matrix g_xtr(x_Tr.rows(), x_Tr.cols());
        if (generator_discriminates) {
            if (kld_tr < hp.margin_kld) {
                Matrix dmu_tr(mu_tr.rows(), mu_tr.cols()), dlv_tr(mu_tr.rows(), mu_tr.cols());
                kld_prior_lv_backward(mu_tr, lv_tr, -hp.gamma, dmu_tr, dlv_tr);
                g_xtr = model.encoder.backward(cache_etr, {dmu_tr, dlv_tr}, false);
            }
            if (mse_between < hp.margin_mse) {
                const double f = -2.0 / n;
                for (std::size_t i = 0; i < g_xr.size(); ++i) {
                    const double diff = x_r.at_flat(i) - x_Tr.at_flat(i);
                    g_xr.at_flat(i) += f * diff;
                    g_xtr.at_flat(i) -= f * diff;
                }
            }
        }

        model.generator.backward(cache_gz, g_xr, true);
        Matrix g_zt = model.generator.backward(cache_gzt, g_xtr, true);

        // z_T = mu_T + sigma_T (.) eps feeds back into the transformer heads,
        // alongside lambda * L_T.
        Matrix dmu_t(mu_t.rows(), mu_t.cols()), dlv_t(mu_t.rows(), mu_t.cols());
        sampler_backward(g_zt, data.eps_zT, sigma_t, dmu_t, dlv_t);
        kld_gauss_lv_backward_second(mu, lv, mu_t, lv_t, hp.lambda, dmu_t, dlv_t);
        model.transformer.backward(cache_t, {dmu_t, dlv_t}, true);
    }
    return out;
}

LossBreakdown step_two_loss(AdvaeModel& model, const StepTwoData& data, bool with_grad) {
    const Hyperparams& hp = model.hyper;
    const bool encoder_discriminates = model.variant != Variant::g_advae;

    ForwardCache cache_ex, cache_gz, cache_er, cache_etr;
    auto [mu, lv] = model.encoder.forward2(data.x, cache_ex);
    Matrix sigma = lv;
    for (std::size_t i = 0; i < sigma.size(); ++i) sigma.at_flat(i) = std::exp(0.5 * sigma.at_flat(i));
    Matrix z = reparam_fixed(mu, sigma, data.eps_z);
    Matrix x_r = model.generator.forward(z, cache_gz);

    LossBreakdown out;
    out.mse = loss_mse(data.x, x_r);
    out.kld_prior = kld_prior_lv(mu, lv);
    out.l_E = out.mse + hp.lambda * out.kld_prior;

    double kld_r = 0.0, kld_tr = 0.0;
    Matrix mu_r, lv_r, mu_tr, lv_tr;
    if (encoder_discriminates) {
        auto er = model.encoder.forward2(x_r, cache_er);
        mu_r = std::move(er.first);
        lv_r = std::move(er.second);
        Matrix x_Tr = model.generator.infer(data.z_T);
        auto etr = model.encoder.forward2(x_Tr, cache_etr);
        mu_tr = std::move(etr.first);
        lv_tr = std::move(etr.second);
        kld_r = kld_prior_lv(mu_r, lv_r);
        kld_tr = kld_prior_lv(mu_tr, lv_tr);
        out.l_E += hp.gamma * hinge(hp.margin_kld, kld_r) + hp.gamma * hinge(hp.margin_kld, kld_tr);
    }

    if (with_grad) {
        // Hinge terms: encoder weights only, reconstructions detached.
        if (encoder_discriminates) {
            if (kld_r < hp.margin_kld) {
                Matrix dmu_r(mu_r.rows(), mu_r.cols()), dlv_r(mu_r.rows(), mu_r.cols());
                kld_prior_lv_backward(mu_r, lv_r, -hp.gamma, dmu_r, dlv_r);
                model.encoder.backward(cache_er, {dmu_r, dlv_r}, true);
            }
            if (kld_tr < hp.margin_kld) {
                Matrix dmu_tr(mu_tr.rows(), mu_tr.cols()), dlv_tr(mu_tr.rows(), mu_tr.cols());
                kld_prior_lv_backward(mu_tr, lv_tr, -hp.gamma, dmu_tr, dlv_tr);
                model.encoder.backward(cache_etr, {dmu_tr, dlv_tr}, true);
            }
        }
        // Reconstruction + prior terms through the live encoder pass; the
        // generator only passes gradient through.
        Matrix dx_r = mse_grad(data.x, x_r, 1.0);
        Matrix g_z = model.generator.backward(cache_gz, dx_r, false);
        Matrix dmu(mu.rows(), mu.cols()), dlv(mu.rows(), mu.cols());
        sampler_backward(g_z, data.eps_z, sigma, dmu, dlv);
        kld_prior_lv_backward(mu, lv, hp.lambda, dmu, dlv);
        model.encoder.backward(cache_ex, {dmu, dlv}, true);
    }
    return out;
}

LossBreakdown single_step_loss(AdvaeModel& model, const Matrix& x, const Matrix& eps_z, bool with_grad) {
    const Hyperparams& hp = model.hyper;
    const bool is_ae = model.variant == Variant::ae;

    ForwardCache cache_ex, cache_gz;
    auto [mu, lv] = model.encoder.forward2(x, cache_ex);
    Matrix sigma = lv;
    for (std::size_t i = 0; i < sigma.size(); ++i) sigma.at_flat(i) = std::exp(0.5 * sigma.at_flat(i));
    Matrix z = is_ae ? mu : reparam_fixed(mu, sigma, eps_z);
    Matrix x_r = model.generator.forward(z, cache_gz);

    LossBreakdown out;
    out.mse = loss_mse(x, x_r);
    if (!is_ae) {
        out.kld_prior = kld_prior_lv(mu, lv);
        out.l_E = out.mse + hp.lambda * out.kld_prior;
    } else {
        out.l_E = out.mse;
    }

    if (with_grad) {
        Matrix dx_r = mse_grad(x, x_r, 1.0);
        Matrix g_z = model.generator.backward(cache_gz, dx_r, true);
        Matrix dmu(mu.rows(), mu.cols()), dlv(mu.rows(), mu.cols());
        if (is_ae) {
            dmu += g_z;
        } else {
            sampler_backward(g_z, eps_z, sigma, dmu, dlv);
            kld_prior_lv_backward(mu, lv, hp.lambda, dmu, dlv);
        }
        model.encoder.backward(cache_ex, {dmu, dlv}, true);
    }
    return out;
}

LossBreakdown loss_variant(AdvaeModel& model, const Matrix& batch, RngStream& rng) {
    const std::size_t latent = model.hyper.latent_dim;
    switch (model.variant) {
    case Variant::vae:
    case Variant::ae: {
        Matrix eps = sample_standard_normal(rng, batch.rows(), latent);
        return single_step_loss(model, batch, eps, false);
    }
    case Variant::advae:
    case Variant::e_advae:
    case Variant::g_advae: {
        StepOneData one;
        one.x = batch;
        one.eps_z = sample_standard_normal(rng, batch.rows(), latent);
        one.eps_zT = sample_standard_normal(rng, batch.rows(), latent);
        LossBreakdown first = step_one_loss(model, one, false);
        StepTwoData two{batch, one.eps_z, one.z_T};
        LossBreakdown second = step_two_loss(model, two, false);
        first.kld_prior = second.kld_prior;
        first.l_E = second.l_E;
        first.mse = second.mse;
        return first;
    }
    }
    throw UsageError("loss_variant: unknown variant");
}

} // namespace advae
