#pragma once

// Inner-product GW barycenters of zero-mean Gaussian probability measures.
// The barycenter shares the inputs' aligned eigenbasis, so only its spectrum
// is computed. Coordinate j of the barycenter receives contributions from
// every input with more than j dimensions.

#include <cstddef>
#include <string_view>
#include <vector>

#include "gwgauss/gaussian.hpp"

namespace gwgauss {

struct BarycenterSpec {
    std::vector<GaussianMeasure> measures;
    std::vector<double> weights;  ///< positive, summing to 1
    std::size_t target_dim = 0;   ///< 1 <= d <= max input dimension
    double epsilon = 0.0;
};

/// Which printed closed form for the entropic kappa the numerical
/// maximiser agreed with.
enum class FormulaFlag {
    Both,         ///< both formulas agree with the maximiser (e.g. eps = 0)
    Proof,        ///< 1 - eps / (2 lambda (A + sqrt(A^2 - eps B)))
    Statement,    ///< 1 - eps / (lambda (A + sqrt(A^2 - eps B)))
    Neither,      ///< maximiser result returned instead
    Unvalidated,  ///< too many contributing measures for exhaustive search
};

[[nodiscard]] std::string_view to_string(FormulaFlag flag) noexcept;

struct BarycenterResult {
    std::vector<double> spectrum;
    /// kappas[l][j]; zero where measure l has no coordinate j.
    std::vector<std::vector<double>> kappas;
    std::vector<bool> condition_ok;
    std::vector<double> A;  ///< sum_l alpha_l lambda_{l,j} over contributing l
    std::vector<double> B;  ///< sum_l alpha_l over contributing l
    std::vector<FormulaFlag> formula_flags;
    FormulaFlag formula_flag = FormulaFlag::Both;
    /// True when some coordinate returned the maximiser's kappas.
    bool oracle_used = false;
};

/// Weighted truncated mean of the input spectra. Throws InvalidWeights,
/// DimensionTooLarge, UnbalancedInput, NegativeEpsilon, or InvalidArgument
/// if epsilon != 0.
[[nodiscard]] BarycenterResult igw_barycenter(const BarycenterSpec& spec);

/// Entropic barycenter under the small-epsilon condition
///   A_j^2 >= eps B_j  and  eps <= 2 lambda_{l,j} (A_j + sqrt(A_j^2 - eps B_j))
/// for all contributing l. Per coordinate, the closed form is validated
/// against subset_search_maximizer; see FormulaFlag. Throws
/// EpsilonConditionError listing every failing (measure, coordinate) pair.
[[nodiscard]] BarycenterResult entropic_igw_barycenter(const BarycenterSpec& spec);

/// Objective (sum a_i x_i)^2 + sum (b_i / 2) log(1 - x_i).
[[nodiscard]] double subset_objective(const std::vector<double>& a, const std::vector<double>& b,
                                      const std::vector<double>& x);

struct SubsetSearchResult {
    std::vector<std::size_t> subset;  ///< active indices, ascending
    std::vector<double> x;            ///< zero outside the subset
    double value = 0.0;
};

inline constexpr std::size_t kMaxSubsetSearch = 24;

/// Exhaustive maximisation of subset_objective over x in [0, 1)^s by
/// enumerating the active set. Subsets are visited by decreasing size and
/// a later subset must be strictly better to replace the incumbent.
/// Throws TooManyIndices for s > 24 and InvalidArgument for mismatched or
/// non-positive inputs.
[[nodiscard]] SubsetSearchResult subset_search_maximizer(const std::vector<double>& a,
                                                         const std::vector<double>& b);

}  // namespace gwgauss
