#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace agora {

// splitmix64 finalizer; used to spread seeds across replica streams.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Seed for the i-th independent stream of a run.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    return mix64(master ^ mix64(stream + 1));
}

// One RNG stream: std::mt19937_64 (bit-reproducible engine per the standard)
// plus hand-rolled variate transforms so that the produced doubles do not
// depend on the standard library's unspecified distribution algorithms.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t raw() { return engine_(); }

    // Uniform on [0,1).
    double u01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform on (0,1]; safe to pass to log().
    double u01_pos() { return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53; }

    // Unit-mean exponential.
    double exponential() { return -std::log(u01_pos()); }

    // Standard normal, Marsaglia polar method (exact; caches the pair).
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * u01() - 1.0;
            v = 2.0 * u01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        has_spare_ = true;
        return u * m;
    }

    // Gamma(shape k, scale 1) for integer k: sum of k unit exponentials.
    double gamma_int(int k) {
        double acc = 0.0;
        for (int i = 0; i < k; ++i) acc += exponential();
        return acc;
    }

    // Isotropic unit vector in R^d (d >= 1), written to out[0..d).
    void unit_vector(int d, double* out) {
        for (;;) {
            double norm2 = 0.0;
            for (int k = 0; k < d; ++k) {
                out[k] = normal();
                norm2 += out[k] * out[k];
            }
            if (norm2 > 0.0) {
                const double inv = 1.0 / std::sqrt(norm2);
                for (int k = 0; k < d; ++k) out[k] *= inv;
                return;
            }
        }
    }

    // Uniform point in the closed unit ball of R^d.
    void uniform_in_ball(int d, double* out) {
        unit_vector(d, out);
        const double r = std::pow(u01_pos(), 1.0 / d);
        for (int k = 0; k < d; ++k) out[k] *= r;
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Rescales v so that |v| <= radius holds exactly in floating point; a
// sampled ball point can otherwise exceed its nominal radius by an ulp
// after scaling, which would break hard displacement-bound contracts.
inline void clamp_to_ball(double* v, int d, double radius) {
    for (;;) {
        double n2 = 0.0;
        for (int k = 0; k < d; ++k) n2 += v[k] * v[k];
        if (n2 <= radius * radius) return;
        const double s = radius / std::sqrt(n2);
        for (int k = 0; k < d; ++k) v[k] *= s;
    }
}

}  // namespace agora
