#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "agora/errors.hpp"
#include "agora/io.hpp"

namespace agora {
namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

[[noreturn]] void schema_error(const std::string& path, std::size_t line,
                               const std::string& msg) {
    throw ValidationError(path + ":" + std::to_string(line) + ": " + msg);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

double parse_double(const std::string& s, const std::string& path, std::size_t line) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        schema_error(path, line, "bad numeric field '" + s + "'");
    return v;
}

long long parse_int(const std::string& s, const std::string& path, std::size_t line) {
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        schema_error(path, line, "bad integer field '" + s + "'");
    return v;
}

}  // namespace

PointsFile to_points_file(const BranchingTree& tree) {
    if (!tree.has_locations)
        throw ValidationError("cannot serialize a tree generated without locations");
    PointsFile pf;
    pf.d = tree.params.d;
    pf.has_birth_times = true;
    pf.points = tree.chi;
    pf.parent = tree.parent;
    pf.is_seed.assign(tree.parent.size(), 0);
    pf.birth_time = tree.tau;
    return pf;
}

PointsFile to_points_file(const PointTree& tree) {
    PointsFile pf;
    pf.d = tree.d;
    pf.has_birth_times = false;
    pf.points = tree.points;
    pf.parent = tree.parent;
    pf.is_seed = tree.is_seed;
    return pf;
}

void write_points_csv(const PointsFile& pf, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path, "cannot open for writing");
    out << "id,parent_id,birth_time,is_seed";
    for (int k = 1; k <= pf.d; ++k) out << ",x" << k;
    out << "\n";
    for (int i = 0; i < pf.size(); ++i) {
        out << i << ',' << pf.parent[static_cast<std::size_t>(i)] << ',';
        if (pf.has_birth_times) out << fmt17(pf.birth_time[static_cast<std::size_t>(i)]);
        out << ',' << static_cast<int>(pf.is_seed[static_cast<std::size_t>(i)]);
        const double* p = pf.location(i);
        for (int k = 0; k < pf.d; ++k) out << ',' << fmt17(p[k]);
        out << "\n";
    }
    out.flush();
    if (!out) throw IoError(path, "write failed");
}

void write_points_csv(const BranchingTree& tree, const std::string& path) {
    write_points_csv(to_points_file(tree), path);
}

void write_points_csv(const PointTree& tree, const std::string& path) {
    write_points_csv(to_points_file(tree), path);
}

PointsFile read_points_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path, "cannot open for reading");

    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line)) schema_error(path, 1, "empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::vector<std::string> header = split_csv_line(line);
    if (header.size() < 5 || header[0] != "id" || header[1] != "parent_id" ||
        header[2] != "birth_time" || header[3] != "is_seed")
        schema_error(path, 1, "malformed header (expected id,parent_id,birth_time,is_seed,x1,...)");
    const int d = static_cast<int>(header.size()) - 4;
    for (int k = 0; k < d; ++k) {
        if (header[static_cast<std::size_t>(4 + k)] != "x" + std::to_string(k + 1))
            schema_error(path, 1, "malformed coordinate column '" +
                                      header[static_cast<std::size_t>(4 + k)] + "'");
    }

    PointsFile pf;
    pf.d = d;
    bool first_row = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> f = split_csv_line(line);
        if (f.size() != header.size())
            schema_error(path, line_no,
                         "expected " + std::to_string(header.size()) + " fields, got " +
                             std::to_string(f.size()));
        const long long id = parse_int(f[0], path, line_no);
        if (id != pf.size()) schema_error(path, line_no, "ids must be dense and in order");
        const long long parent = parse_int(f[1], path, line_no);
        if (id == 0) {
            if (parent != -1) schema_error(path, line_no, "root row must have parent_id -1");
        } else if (parent < 0 || parent >= id) {
            schema_error(path, line_no, "parent_id must be a lower existing id");
        }
        const bool has_bt = !f[2].empty();
        if (first_row) {
            pf.has_birth_times = has_bt;
            first_row = false;
        } else if (has_bt != pf.has_birth_times) {
            schema_error(path, line_no, "birth_time present on some rows but not others");
        }
        if (has_bt) pf.birth_time.push_back(parse_double(f[2], path, line_no));
        const long long seed_flag = parse_int(f[3], path, line_no);
        if (seed_flag != 0 && seed_flag != 1)
            schema_error(path, line_no, "is_seed must be 0 or 1");
        pf.parent.push_back(static_cast<int>(parent));
        pf.is_seed.push_back(static_cast<std::uint8_t>(seed_flag));
        for (int k = 0; k < d; ++k) {
            const double v = parse_double(f[static_cast<std::size_t>(4 + k)], path, line_no);
            if (!std::isfinite(v)) schema_error(path, line_no, "non-finite coordinate");
            pf.points.push_back(v);
        }
    }
    if (pf.size() == 0) schema_error(path, line_no, "no data rows");
    return pf;
}

}  // namespace agora
