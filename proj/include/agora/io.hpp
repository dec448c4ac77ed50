#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "agora/branching.hpp"
#include "agora/dimension.hpp"
#include "agora/discrete.hpp"

namespace agora {

inline constexpr int kFormatVersion = 1;

// Unified on-disk point schema:
//   id,parent_id,birth_time,is_seed,x1,...,xd
// Root row first, parent sentinel -1, doubles at 17 significant digits
// (round-trip exact). birth_time is empty for discrete models.
struct PointsFile {
    int d = 0;
    bool has_birth_times = false;
    std::vector<double> points;          // row-major
    std::vector<int> parent;
    std::vector<std::uint8_t> is_seed;
    std::vector<double> birth_time;      // empty when !has_birth_times

    int size() const { return static_cast<int>(parent.size()); }
    const double* location(int i) const {
        return points.data() + static_cast<std::size_t>(i) * d;
    }
};

PointsFile to_points_file(const BranchingTree& tree);
PointsFile to_points_file(const PointTree& tree);

void write_points_csv(const PointsFile& pf, const std::string& path);
void write_points_csv(const BranchingTree& tree, const std::string& path);
void write_points_csv(const PointTree& tree, const std::string& path);

// Inverse of write_points_csv. Schema violations raise ValidationError
// with the offending line number; I/O failures raise IoError.
PointsFile read_points_csv(const std::string& path);

// ---- run manifest ----------------------------------------------------------

struct RunManifest {
    std::string model;  // "ct" | "smooth" | "hard"
    int d = 2;
    double alpha = 0.0;
    double rho = 0.0;
    double theta = 0.0;
    double beta = 1.0;
    std::string profile;  // continuous model only, "" otherwise
    std::int64_t n = 0;   // vertex budget (ct) or accepted points (discrete)
    std::optional<double> max_time;
    std::optional<double> r_count;  // hard model count-radius override
    std::uint64_t seed = 0;
    std::string library_version;
    std::string created_utc;
    std::vector<std::pair<std::string, std::string>> outputs;  // (basename, sha256)
};

void write_manifest(const RunManifest& m, const std::string& path);
RunManifest read_manifest(const std::string& path);

// ---- SVG emission ----------------------------------------------------------

struct ScatterOptions {
    int size_px = 1000;
    bool edges = false;
    double point_radius_px = 0.0;  // 0 = auto from point count
};

// Standalone scatter SVG; d must be 2 (other dimensions rejected).
void emit_scatter_svg(const std::vector<double>& points, int d,
                      const std::vector<int>* parents, const std::string& path,
                      const ScatterOptions& opt = {});

// Log-log plot of a dimension fit with the fitted line.
void emit_loglog_svg(const DimFit& fit, const std::string& path);

}  // namespace agora
