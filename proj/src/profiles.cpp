#include "agora/profiles.hpp"

#include <cmath>

#include "agora/errors.hpp"

namespace agora {

double profile_density(ProfileKind kind, double r) {
    switch (kind) {
        case ProfileKind::Exponential: return std::exp(-r);
        case ProfileKind::Gaussian: return std::exp(-0.5 * r * r);
        case ProfileKind::HardCutoff: return r <= 1.0 ? 1.0 : 0.0;
    }
    return 0.0;
}

const char* profile_name(ProfileKind kind) {
    switch (kind) {
        case ProfileKind::Exponential: return "exponential";
        case ProfileKind::Gaussian: return "gaussian";
        case ProfileKind::HardCutoff: return "hardcutoff";
    }
    return "?";
}

ProfileKind profile_from_name(const std::string& name) {
    if (name == "exponential") return ProfileKind::Exponential;
    if (name == "gaussian") return ProfileKind::Gaussian;
    if (name == "hardcutoff") return ProfileKind::HardCutoff;
    throw ValidationError("unknown profile '" + name +
                          "' (expected exponential|gaussian|hardcutoff)");
}

double unit_ball_volume(int d) {
    if (d < 1) throw ValidationError("unit_ball_volume: d must be >= 1");
    return std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

double compute_cd(ProfileKind kind, int d) {
    if (d < 1) throw ValidationError("compute_cd: d must be >= 1");
    switch (kind) {
        case ProfileKind::Exponential: {
            double fact = 1.0;
            for (int k = 2; k <= d; ++k) fact *= k;
            return fact * unit_ball_volume(d);
        }
        case ProfileKind::Gaussian:
            return std::pow(2.0 * M_PI, 0.5 * d);
        case ProfileKind::HardCutoff:
            return unit_ball_volume(d);
    }
    return 0.0;
}

void validate_params(const ProcessParams& p) {
    if (p.d < 1 || p.d > kMaxDim)
        throw ValidationError("params: d must be in [1, " + std::to_string(kMaxDim) + "]");
    if (!(p.beta > 0.0)) throw ValidationError("params: beta must be > 0");
    if (!(p.theta > 0.0)) throw ValidationError("params: theta must be > 0");
    if (!(p.rho > 0.0) || !std::isfinite(p.rho))
        throw ValidationError("params: rho must be finite and > 0");
    if (!(p.alpha > 0.0)) throw ValidationError("params: alpha must be > 0");
}

ProcessParams derive_params(int d, double alpha, ProfileKind profile,
                            std::uint64_t seed) {
    if (d < 1 || d > kMaxDim)
        throw ValidationError("derive_params: d must be in [1, " + std::to_string(kMaxDim) + "]");
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw ValidationError("derive_params: alpha must be finite and > 0");
    return derive_params_from_rho(d, alpha / d, profile, seed);
}

ProcessParams derive_params_from_rho(int d, double rho, ProfileKind profile,
                                     std::uint64_t seed) {
    if (d < 1 || d > kMaxDim)
        throw ValidationError("derive_params: d must be in [1, " + std::to_string(kMaxDim) + "]");
    if (!(rho > 0.0) || !std::isfinite(rho))
        throw ValidationError("derive_params: rho must be finite and > 0");
    ProcessParams p;
    p.d = d;
    p.profile = profile;
    p.beta = 1.0;
    p.rho = rho;
    p.alpha = d * rho;
    p.theta = compute_cd(profile, d) * p.beta / rho;
    p.seed = seed;
    validate_params(p);
    return p;
}

void sample_displacement(ProfileKind kind, int d, double t, RngStream& rng,
                         double* out, double beta) {
    const double scale = std::pow(t / beta, -1.0 / d);
    switch (kind) {
        case ProfileKind::Exponential: {
            // radius density ~ e^{-r} r^{d-1}: Gamma(d, 1) variate
            const double r = scale * rng.gamma_int(d);
            rng.unit_vector(d, out);
            for (int k = 0; k < d; ++k) out[k] *= r;
            return;
        }
        case ProfileKind::Gaussian: {
            // d independent centered normals with standard deviation t^{-1/d}
            for (int k = 0; k < d; ++k) out[k] = scale * rng.normal();
            return;
        }
        case ProfileKind::HardCutoff: {
            // uniform in the ball of radius t^{-1/d}; the bound is a hard
            // contract, so clamp away any last-ulp excess
            rng.uniform_in_ball(d, out);
            for (int k = 0; k < d; ++k) out[k] *= scale;
            clamp_to_ball(out, d, scale);
            return;
        }
    }
}

}  // namespace agora
