#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tfus/data_model.hpp"

namespace tfus::features {

inline constexpr int kStatCount = 10;
inline constexpr int kHaralickCount = 12;
inline constexpr std::array<int, 3> kDefaultDistances = {1, 5, 10};
inline constexpr int kHandcraftedCount = 46; // 10 stats + 12 Haralick x 3 distances

struct GlcmConfig {
    int distance = 1;
    int levels = 64;
    bool symmetric = true;
    // Pixel offsets as (d_row, d_col); empty means the four defaults
    // (d,0), (d,d), (0,d), (-d,d).
    std::vector<std::pair<int, int>> directions;

    GlcmConfig() = default;
    explicit GlcmConfig(int d, int lv = 64) : distance(d), levels(lv) {}

    void validate() const; // levels >= 2, distance >= 1
    std::vector<std::pair<int, int>> effective_directions() const;
    std::uint64_t hash() const; // cache key component
};

struct GlcmMatrix {
    Eigen::MatrixXd probs; // levels x levels, entries sum to 1
    long pair_count = 0;
};

struct RoiStats {
    // area, min, max, mean, std, skewness, kurtosis, p25, median, p75
    std::array<double, kStatCount> values{};
    bool degenerate = false; // std == 0: skewness/kurtosis reported as 0
};

struct HandcraftedVector {
    std::array<double, kHandcraftedCount> values{};
    bool stats_degenerate = false;
    // Per configured distance: true when no co-occurring pair existed and the
    // 12 Haralick slots were zero-filled.
    std::array<bool, 3> glcm_no_pairs{};
};

// Population moments over ROI pixels; percentiles by linear interpolation
// between closest ranks. Throws DataError on an empty ROI.
RoiStats roi_statistics(const data::MriSlice& slice);

// ROI-relative min-max quantization into `levels` bins, pairs restricted to
// mask-interior endpoints, pooled over directions, symmetrized, normalized.
// Throws NumericalError("no co-occurring pairs...") when nothing pairs at d.
GlcmMatrix compute_glcm(const data::MriSlice& slice, const GlcmConfig& config);

// In order: asm, contrast, correlation, variance, idm, sum_average,
// sum_variance, sum_entropy, entropy, difference_variance,
// difference_entropy, max_probability. Natural logs, 0*log0 == 0.
std::array<double, kHaralickCount> haralick_features(const GlcmMatrix& glcm);

// [roi_statistics ++ haralick(d=1) ++ haralick(d=5) ++ haralick(d=10)].
// `configs` must list exactly three distances in ascending order.
HandcraftedVector extract_handcrafted(const data::MriSlice& slice,
                                      const std::vector<GlcmConfig>& configs);

std::vector<GlcmConfig> default_glcm_configs(int levels = 64);

// Column names in the fixed HandcraftedVector order, e.g. "area", "asm_d1".
const std::array<std::string, kHandcraftedCount>& handcrafted_names();

} // namespace tfus::features
