#include "gwgauss_cli/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <Eigen/Dense>

#include "gwgauss/error.hpp"

namespace gwgauss::cli {

namespace {

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); }

double number(const nlohmann::json& v, const char* what) {
    if (!v.is_number()) malformed(std::string(what) + " must be a number");
    return v.get<double>();
}

std::string format_double(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s(buf);
    if (s.find_first_of(".eE") == std::string::npos) s += ".0";
    return s;
}

void write_value(std::ostream& os, const nlohmann::json& v, int indent, int depth) {
    const auto newline = [&](int d) {
        if (indent < 0) return;
        os << '\n' << std::string(static_cast<std::size_t>(indent * d), ' ');
    };
    switch (v.type()) {
        case nlohmann::json::value_t::object: {
            if (v.empty()) { os << "{}"; return; }
            os << '{';
            bool first = true;
            for (auto it = v.begin(); it != v.end(); ++it) {
                if (!first) os << ',';
                first = false;
                newline(depth + 1);
                os << nlohmann::json(it.key()).dump() << (indent < 0 ? ":" : ": ");
                write_value(os, it.value(), indent, depth + 1);
            }
            newline(depth);
            os << '}';
            return;
        }
        case nlohmann::json::value_t::array: {
            if (v.empty()) { os << "[]"; return; }
            os << '[';
            bool first = true;
            for (const auto& e : v) {
                if (!first) os << ',';
                first = false;
                newline(depth + 1);
                write_value(os, e, indent, depth + 1);
            }
            newline(depth);
            os << ']';
            return;
        }
        case nlohmann::json::value_t::number_float:
            os << format_double(v.get<double>());
            return;
        default:
            os << v.dump();
            return;
    }
}

}  // namespace

GaussianMeasure measure_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) malformed("measure document must be a JSON object");
    const double mass = doc.contains("mass") ? number(doc.at("mass"), "mass") : 1.0;
    const bool has_cov = doc.contains("covariance");
    const bool has_spec = doc.contains("spectrum");
    if (has_cov == has_spec) malformed("measure needs exactly one of \"covariance\" or \"spectrum\"");

    if (has_spec) {
        const auto& s = doc.at("spectrum");
        if (!s.is_array() || s.empty()) malformed("spectrum must be a non-empty array");
        std::vector<double> spectrum;
        for (const auto& v : s) spectrum.push_back(number(v, "spectrum entry"));
        return gaussian_from_spectrum(mass, std::move(spectrum));
    }
    const auto& c = doc.at("covariance");
    if (!c.is_array() || c.empty()) malformed("covariance must be a non-empty array of rows");
    const auto n = static_cast<Eigen::Index>(c.size());
    Eigen::MatrixXd cov(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& row = c.at(static_cast<std::size_t>(i));
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) malformed("covariance must be square");
        for (Eigen::Index j = 0; j < n; ++j) cov(i, j) = number(row.at(static_cast<std::size_t>(j)), "covariance entry");
    }
    return make_gaussian(mass, cov);
}

GaussianMeasure read_measure(const std::string& path) {
    std::ifstream in(path);
    if (!in) malformed("cannot open measure file " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        malformed(path + ": " + e.what());
    }
    return measure_from_json(doc);
}

void write_json(std::ostream& os, const nlohmann::json& doc, int indent) {
    write_value(os, doc, indent, 0);
    os << '\n';
}

std::string dump_json(const nlohmann::json& doc, int indent) {
    std::ostringstream os;
    write_json(os, doc, indent);
    return os.str();
}

}  // namespace gwgauss::cli
