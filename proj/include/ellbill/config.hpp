#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "ellbill/billiard.hpp"

namespace ellbill {

struct Tolerances {
    double quad_tol = 1e-12;
    double root_tol = 1e-13;
    double eps_sep = kDefaultEpsSep;
};

struct RunConfig {
    double a = 1.4142135623730951;
    double b = 1.0;
    Tolerances tol;
    std::string out;
    unsigned threads = 0;
    nlohmann::json params = nlohmann::json::object();  ///< command-specific parameters

    void validate() const;
};

void to_json(nlohmann::json& j, const RunConfig& c);
void from_json(const nlohmann::json& j, RunConfig& c);

/// 64-bit FNV-1a of a byte string.
std::uint64_t fnv1a(const std::string& bytes);

/// Hash of the canonical (key-sorted, compact) serialization.
std::string config_hash(const RunConfig& c);

/// "lo:hi:n" -> n equally spaced values including both ends.
std::vector<double> parse_grid(const std::string& spec);
/// "10,20,40" -> {10, 20, 40}.
std::vector<int> parse_int_list(const std::string& spec);

/// CSV with '#' metadata lines followed by a header row.
class CsvWriter {
public:
    CsvWriter(std::ostream& os, const std::vector<std::string>& meta, const std::vector<std::string>& columns);
    void row(const std::vector<double>& values);
    void row(const std::vector<std::string>& cells);

private:
    std::ostream& os_;
    std::size_t width_;
};

/// Shortest round-trip decimal form of a double.
std::string format_number(double v);

}  // namespace ellbill
