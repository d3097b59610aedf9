#include "gwgauss/barycenter.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <sstream>

#include "gwgauss/error.hpp"

namespace gwgauss {

namespace {

constexpr double kWeightSumTolerance = 1e-12;
constexpr double kFormulaAgreement = 1e-6;

void validate(const BarycenterSpec& spec) {
    if (spec.measures.empty()) throw Error(ErrorCode::InvalidWeights, "at least one measure is required");
    if (spec.weights.size() != spec.measures.size()) {
        throw Error(ErrorCode::InvalidWeights, "one weight per measure required");
    }
    double sum = 0.0;
    for (double w : spec.weights) {
        if (!(w > 0.0) || !std::isfinite(w)) throw Error(ErrorCode::InvalidWeights, "weights must be positive");
        sum += w;
    }
    if (std::abs(sum - 1.0) > kWeightSumTolerance) {
        std::ostringstream os;
        os.precision(17);
        os << "weights must sum to 1, got " << sum;
        throw Error(ErrorCode::InvalidWeights, os.str());
    }
    std::size_t max_dim = 0;
    for (const auto& m : spec.measures) {
        if (!m.is_probability()) throw Error(ErrorCode::UnbalancedInput, "barycenter inputs must have mass 1");
        max_dim = std::max(max_dim, m.dim());
    }
    if (spec.target_dim == 0) throw Error(ErrorCode::InvalidArgument, "target dimension must be positive");
    if (spec.target_dim > max_dim) {
        std::ostringstream os;
        os << "target dimension " << spec.target_dim << " exceeds the largest input dimension " << max_dim;
        throw Error(ErrorCode::DimensionTooLarge, os.str());
    }
    if (!(spec.epsilon >= 0.0) || !std::isfinite(spec.epsilon)) {
        throw Error(ErrorCode::NegativeEpsilon, "epsilon must be finite and >= 0");
    }
}

struct Coordinate {
    std::vector<std::size_t> contributing;
    double A = 0.0;
    double B = 0.0;
};

Coordinate coordinate(const BarycenterSpec& spec, std::size_t j) {
    Coordinate c;
    for (std::size_t l = 0; l < spec.measures.size(); ++l) {
        if (j < spec.measures[l].dim()) {
            c.contributing.push_back(l);
            c.A += spec.weights[l] * spec.measures[l].eigenvalue(j);
            c.B += spec.weights[l];
        }
    }
    return c;
}

BarycenterResult empty_result(const BarycenterSpec& spec) {
    BarycenterResult r;
    const std::size_t d = spec.target_dim;
    r.spectrum.assign(d, 0.0);
    r.kappas.assign(spec.measures.size(), std::vector<double>(d, 0.0));
    r.condition_ok.assign(d, true);
    r.A.assign(d, 0.0);
    r.B.assign(d, 0.0);
    r.formula_flags.assign(d, FormulaFlag::Both);
    return r;
}

// Bit 0 = proof formula agrees, bit 1 = statement formula agrees.
FormulaFlag flag_from_bits(unsigned bits) {
    switch (bits) {
        case 3u: return FormulaFlag::Both;
        case 1u: return FormulaFlag::Proof;
        case 2u: return FormulaFlag::Statement;
        default: return FormulaFlag::Neither;
    }
}

}  // namespace

std::string_view to_string(FormulaFlag flag) noexcept {
    switch (flag) {
        case FormulaFlag::Both: return "both";
        case FormulaFlag::Proof: return "proof";
        case FormulaFlag::Statement: return "statement";
        case FormulaFlag::Neither: return "neither";
        case FormulaFlag::Unvalidated: return "unvalidated";
    }
    return "unknown";
}

BarycenterResult igw_barycenter(const BarycenterSpec& spec) {
    validate(spec);
    if (spec.epsilon != 0.0) {
        throw Error(ErrorCode::InvalidArgument, "igw_barycenter requires epsilon = 0");
    }
    BarycenterResult r = empty_result(spec);
    for (std::size_t j = 0; j < spec.target_dim; ++j) {
        const Coordinate c = coordinate(spec, j);
        r.A[j] = c.A;
        r.B[j] = c.B;
        r.spectrum[j] = c.A;
        for (std::size_t l : c.contributing) r.kappas[l][j] = 1.0;
    }
    return r;
}

BarycenterResult entropic_igw_barycenter(const BarycenterSpec& spec) {
    validate(spec);
    if (spec.epsilon == 0.0) return igw_barycenter(spec);
    const double eps = spec.epsilon;
    const std::size_t d = spec.target_dim;

    std::vector<Coordinate> coords(d);
    std::vector<ConditionFailure> failures;
    BarycenterResult r = empty_result(spec);
    for (std::size_t j = 0; j < d; ++j) {
        coords[j] = coordinate(spec, j);
        const Coordinate& c = coords[j];
        r.A[j] = c.A;
        r.B[j] = c.B;
        const double disc = c.A * c.A - eps * c.B;
        for (std::size_t l : c.contributing) {
            const bool ok = disc >= 0.0 && eps <= 2.0 * spec.measures[l].eigenvalue(j) * (c.A + std::sqrt(disc));
            if (!ok) {
                failures.push_back({l, j});
                r.condition_ok[j] = false;
            }
        }
    }
    if (!failures.empty()) {
        std::ostringstream os;
        os << "small-epsilon condition fails for (measure, coordinate):";
        for (const auto& f : failures) os << " (" << f.measure << ", " << f.coordinate << ")";
        throw EpsilonConditionError(std::move(failures), os.str());
    }

    unsigned overall = 3u;
    bool any_validated = false;
    for (std::size_t j = 0; j < d; ++j) {
        const Coordinate& c = coords[j];
        const double root = c.A + std::sqrt(c.A * c.A - eps * c.B);
        std::vector<double> proof;
        std::vector<double> statement;
        for (std::size_t l : c.contributing) {
            const double lam = spec.measures[l].eigenvalue(j);
            proof.push_back(1.0 - eps / (2.0 * lam * root));
            statement.push_back(1.0 - eps / (lam * root));
        }

        std::vector<double> chosen = proof;
        FormulaFlag flag = FormulaFlag::Unvalidated;
        if (c.contributing.size() <= kMaxSubsetSearch) {
            std::vector<double> a;
            std::vector<double> b;
            for (std::size_t l : c.contributing) {
                a.push_back(spec.weights[l] * spec.measures[l].eigenvalue(j));
                b.push_back(eps * spec.weights[l]);
            }
            const SubsetSearchResult oracle = subset_search_maximizer(a, b);
            double dp = 0.0;
            double ds = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) {
                dp = std::max(dp, std::abs(proof[i] - oracle.x[i]));
                ds = std::max(ds, std::abs(statement[i] - oracle.x[i]));
            }
            const unsigned bits = (dp <= kFormulaAgreement ? 1u : 0u) | (ds <= kFormulaAgreement ? 2u : 0u);
            flag = flag_from_bits(bits);
            if (bits == 2u) chosen = statement;
            if (bits == 0u) {
                chosen = oracle.x;
                r.oracle_used = true;
            }
            overall &= bits;
            any_validated = true;
        }
        r.formula_flags[j] = flag;

        double lambda = 0.0;
        for (std::size_t i = 0; i < c.contributing.size(); ++i) {
            const std::size_t l = c.contributing[i];
            r.kappas[l][j] = chosen[i];
            lambda += spec.weights[l] * spec.measures[l].eigenvalue(j) * chosen[i];
        }
        r.spectrum[j] = lambda;
    }
    r.formula_flag = any_validated ? flag_from_bits(overall) : FormulaFlag::Unvalidated;
    return r;
}

double subset_objective(const std::vector<double>& a, const std::vector<double>& b,
                        const std::vector<double>& x) {
    double lin = 0.0;
    double pen = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        lin += a[i] * x[i];
        if (x[i] != 0.0) pen += 0.5 * b[i] * std::log1p(-x[i]);
    }
    return lin * lin + pen;
}

SubsetSearchResult subset_search_maximizer(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t s = a.size();
    if (b.size() != s) throw Error(ErrorCode::InvalidArgument, "a and b must have equal length");
    if (s > kMaxSubsetSearch) {
        std::ostringstream os;
        os << "subset search supports at most " << kMaxSubsetSearch << " indices, got " << s;
        throw Error(ErrorCode::TooManyIndices, os.str());
    }
    for (std::size_t i = 0; i < s; ++i) {
        if (!(a[i] > 0.0) || !(b[i] > 0.0) || !std::isfinite(a[i]) || !std::isfinite(b[i])) {
            throw Error(ErrorCode::InvalidArgument, "a and b must be positive and finite");
        }
    }

    SubsetSearchResult best;
    bool have = false;
    std::vector<double> x(s);
    for (std::size_t card = s + 1; card-- > 0;) {
        // Gosper's hack over masks with popcount = card.
        std::uint32_t mask = card == 0 ? 0u : (card == 32 ? ~0u : (1u << card) - 1u);
        const std::uint32_t limit = 1u << s;
        while (mask < limit) {
            double A = 0.0;
            double B = 0.0;
            for (std::size_t i = 0; i < s; ++i) {
                if (mask & (1u << i)) {
                    A += a[i];
                    B += b[i];
                }
            }
            const double disc = A * A - B;
            bool feasible = disc >= 0.0;
            if (feasible) {
                const double root = A + std::sqrt(disc);
                for (std::size_t i = 0; i < s; ++i) {
                    x[i] = (mask & (1u << i)) ? 1.0 - b[i] / (2.0 * a[i] * root) : 0.0;
                    if (x[i] < 0.0) feasible = false;
                }
            }
            if (feasible) {
                const double v = subset_objective(a, b, x);
                if (!have || v > best.value) {
                    have = true;
                    best.value = v;
                    best.x = x;
                    best.subset.clear();
                    for (std::size_t i = 0; i < s; ++i) {
                        if (mask & (1u << i)) best.subset.push_back(i);
                    }
                }
            }
            if (mask == 0u) break;
            const std::uint32_t lowest = mask & (~mask + 1u);
            const std::uint32_t ripple = mask + lowest;
            mask = (((ripple ^ mask) >> 2) / lowest) | ripple;
        }
    }
    return best;
}

}  // namespace gwgauss
