#pragma once

#include <cstdint>
#include <string>

#include "agora/rng.hpp"

namespace agora {

inline constexpr int kMaxDim = 16;

// Radial decay profile shaping child displacements. All three built-ins are
// bounded with finite moments of every order, and have closed-form total
// mass c_d, which keeps the parameter algebra exact.
enum class ProfileKind {
    Exponential,  // f(r) = exp(-r)
    Gaussian,     // f(r) = exp(-r^2/2)
    HardCutoff,   // f(r) = 1_{r <= 1}
};

// f(r) itself; exposed so diagnostics and tests can integrate it directly.
double profile_density(ProfileKind kind, double r);

const char* profile_name(ProfileKind kind);                 // lowercase wire name
ProfileKind profile_from_name(const std::string& name);     // throws ValidationError

// Volume of the unit ball in R^d: pi^{d/2} / Gamma(d/2 + 1).
double unit_ball_volume(int d);

// Total mass c_d = \int_{R^d} f(|x|) dx, closed form per profile:
//   Exponential -> d! V_d,  Gaussian -> (2 pi)^{d/2},  HardCutoff -> V_d.
double compute_cd(ProfileKind kind, int d);

// Full parameter set of a continuous-model run. Invariants:
//   rho = c_d * beta / theta,  alpha = d * rho,  d >= 1, theta > 0, rho > 0.
// beta is fixed at 1.0 on the public surface; the field is retained so the
// intensity algebra stays literal.
struct ProcessParams {
    int d = 2;
    ProfileKind profile = ProfileKind::Gaussian;
    double beta = 1.0;
    double theta = 0.0;
    double rho = 0.0;
    double alpha = 0.0;
    std::uint64_t seed = 0;
};

// Entry point by target dimension alpha (rho := alpha / d).
ProcessParams derive_params(int d, double alpha, ProfileKind profile,
                            std::uint64_t seed = 0);

// Entry point by growth exponent rho directly.
ProcessParams derive_params_from_rho(int d, double rho, ProfileKind profile,
                                     std::uint64_t seed = 0);

// Throws ValidationError when the ProcessParams invariants are violated.
void validate_params(const ProcessParams& p);

// Isotropic displacement of a child born at time t > 0: the radius has
// density proportional to f(r) r^{d-1}, rescaled by (t/beta)^{-1/d}.
// Writes d coordinates to out.
void sample_displacement(ProfileKind kind, int d, double t, RngStream& rng,
                         double* out, double beta = 1.0);

}  // namespace agora
