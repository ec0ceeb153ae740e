#include "ellbill/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "ellbill/error.hpp"

namespace ellbill {

void RunConfig::validate() const {
    if (!(tol.quad_tol > 0) || !(tol.root_tol > 0) || !(tol.eps_sep > 0))
        fail(ErrorCode::InvalidArgument, "tolerances must be positive");
    make_ellipse(a, b);
}

void to_json(nlohmann::json& j, const RunConfig& c) {
    j = nlohmann::json{{"geometry", {{"a", c.a}, {"b", c.b}}},
                       {"tolerances", {{"quad_tol", c.tol.quad_tol}, {"root_tol", c.tol.root_tol}, {"eps_sep", c.tol.eps_sep}}},
                       {"out", c.out},
                       {"threads", c.threads},
                       {"params", c.params}};
}

void from_json(const nlohmann::json& j, RunConfig& c) {
    if (j.contains("geometry")) {
        const auto& g = j.at("geometry");
        if (g.contains("a")) c.a = g.at("a").get<double>();
        if (g.contains("b")) c.b = g.at("b").get<double>();
    }
    if (j.contains("tolerances")) {
        const auto& t = j.at("tolerances");
        if (t.contains("quad_tol")) c.tol.quad_tol = t.at("quad_tol").get<double>();
        if (t.contains("root_tol")) c.tol.root_tol = t.at("root_tol").get<double>();
        if (t.contains("eps_sep")) c.tol.eps_sep = t.at("eps_sep").get<double>();
    }
    if (j.contains("out")) c.out = j.at("out").get<std::string>();
    if (j.contains("threads")) c.threads = j.at("threads").get<unsigned>();
    if (j.contains("params")) c.params = j.at("params");
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

std::string config_hash(const RunConfig& c) {
    nlohmann::json j = c;
    j.erase("out");
    j.erase("threads");
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(j.dump())));
    return buf;
}

namespace {

double to_double(const std::string& s) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        fail(ErrorCode::ParseError, "not a number: '" + s + "'");
    }
    if (used != s.size()) fail(ErrorCode::ParseError, "not a number: '" + s + "'");
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) parts.push_back(cur);
    if (!s.empty() && s.back() == sep) parts.emplace_back();
    return parts;
}

}  // namespace

std::vector<double> parse_grid(const std::string& spec) {
    const auto parts = split(spec, ':');
    if (parts.size() != 3) fail(ErrorCode::ParseError, "grid must look like lo:hi:n");
    const double lo = to_double(parts[0]), hi = to_double(parts[1]);
    const double nd = to_double(parts[2]);
    if (nd < 1 || nd != std::floor(nd)) fail(ErrorCode::ParseError, "grid count must be a positive integer");
    const int n = static_cast<int>(nd);
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = (n == 1) ? lo : lo + (hi - lo) * i / (n - 1);
    return out;
}

std::vector<int> parse_int_list(const std::string& spec) {
    std::vector<int> out;
    for (const auto& p : split(spec, ',')) {
        int v = 0;
        const auto r = std::from_chars(p.data(), p.data() + p.size(), v);
        if (r.ec != std::errc() || r.ptr != p.data() + p.size()) fail(ErrorCode::ParseError, "not an integer: '" + p + "'");
        out.push_back(v);
    }
    if (out.empty()) fail(ErrorCode::ParseError, "empty integer list");
    return out;
}

std::string format_number(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

CsvWriter::CsvWriter(std::ostream& os, const std::vector<std::string>& meta, const std::vector<std::string>& columns)
    : os_(os), width_(columns.size()) {
    for (const auto& m : meta) os_ << "# " << m << '\n';
    for (std::size_t i = 0; i < columns.size(); ++i) os_ << (i ? "," : "") << columns[i];
    os_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(format_number(v));
    row(cells);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != width_) fail(ErrorCode::InvalidArgument, "CSV row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) os_ << (i ? "," : "") << cells[i];
    os_ << '\n';
}

}  // namespace ellbill
