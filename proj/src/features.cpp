#include "tfus/features.hpp"

#include <algorithm>
#include <cmath>

#include "tfus/binio.hpp"
#include "tfus/errors.hpp"

namespace tfus::features {

namespace {

const std::array<std::string, kHaralickCount> kHaralickNames = {
    "asm",          "contrast",    "correlation",         "variance",
    "idm",          "sum_average", "sum_variance",        "sum_entropy",
    "entropy",      "difference_variance", "difference_entropy", "max_probability"};

double plogp(double p) { return p > 0.0 ? p * std::log(p) : 0.0; }

} // namespace

void GlcmConfig::validate() const {
    if (levels < 2) throw ConfigError("GLCM levels must be >= 2");
    if (distance < 1) throw ConfigError("GLCM distance must be >= 1");
    for (auto [dr, dc] : directions)
        if (dr == 0 && dc == 0) throw ConfigError("GLCM direction offset (0,0) is invalid");
}

std::vector<std::pair<int, int>> GlcmConfig::effective_directions() const {
    if (!directions.empty()) return directions;
    const int d = distance;
    return {{d, 0}, {d, d}, {0, d}, {-d, d}};
}

std::uint64_t GlcmConfig::hash() const {
    std::string repr = "d=" + std::to_string(distance) + ";levels=" + std::to_string(levels) +
                       ";sym=" + (symmetric ? "1" : "0") + ";dirs=";
    for (auto [dr, dc] : effective_directions())
        repr += "(" + std::to_string(dr) + "," + std::to_string(dc) + ")";
    return fnv1a64(repr);
}

RoiStats roi_statistics(const data::MriSlice& slice) {
    std::vector<double> vals;
    vals.reserve(slice.intensities.size());
    for (std::size_t i = 0; i < slice.roi.size(); ++i)
        if (slice.roi[i]) vals.push_back(static_cast<double>(slice.intensities[i]));
    if (vals.empty()) throw DataError("empty ROI in slice '" + slice.slice_id + "'");

    const double n = static_cast<double>(vals.size());
    std::sort(vals.begin(), vals.end());

    double sum = 0.0;
    for (double v : vals) sum += v;
    const double mean = sum / n;

    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : vals) {
        const double d = v - mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    const double sd = std::sqrt(m2);

    bool degenerate = (sd == 0.0);
    const double skewness = degenerate ? 0.0 : m3 / (sd * sd * sd);
    const double kurtosis = degenerate ? 0.0 : m4 / (m2 * m2);

    auto percentile = [&](double p) {
        const double h = p * (n - 1.0);
        const std::size_t lo = static_cast<std::size_t>(h);
        const double frac = h - static_cast<double>(lo);
        if (lo + 1 >= vals.size()) return vals.back();
        return vals[lo] + frac * (vals[lo + 1] - vals[lo]);
    };

    RoiStats out;
    out.values = {n,        vals.front(), vals.back(),      mean,           sd,
                  skewness, kurtosis,     percentile(0.25), percentile(0.5), percentile(0.75)};
    out.degenerate = degenerate;
    return out;
}

GlcmMatrix compute_glcm(const data::MriSlice& slice, const GlcmConfig& config) {
    config.validate();
    const int w = slice.width;
    const int h = slice.height;
    const int levels = config.levels;

    // Quantize ROI pixels to bins; -1 marks pixels outside the ROI.
    std::uint16_t lo = 65535, hi = 0;
    bool any = false;
    for (std::size_t i = 0; i < slice.roi.size(); ++i) {
        if (!slice.roi[i]) continue;
        any = true;
        lo = std::min(lo, slice.intensities[i]);
        hi = std::max(hi, slice.intensities[i]);
    }
    if (!any) throw DataError("empty ROI in slice '" + slice.slice_id + "'");

    std::vector<int> bin(slice.roi.size(), -1);
    const std::uint32_t span = static_cast<std::uint32_t>(hi) - lo;
    for (std::size_t i = 0; i < slice.roi.size(); ++i) {
        if (!slice.roi[i]) continue;
        if (span == 0) {
            bin[i] = 0;
        } else {
            std::uint64_t q = (static_cast<std::uint64_t>(slice.intensities[i] - lo) *
                               static_cast<std::uint64_t>(levels)) /
                              span;
            bin[i] = static_cast<int>(std::min<std::uint64_t>(q, levels - 1));
        }
    }

    Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(levels, levels);
    long pair_count = 0;
    for (auto [dr, dc] : config.effective_directions()) {
        for (int r = 0; r < h; ++r) {
            const int r2 = r + dr;
            if (r2 < 0 || r2 >= h) continue;
            for (int c = 0; c < w; ++c) {
                const int c2 = c + dc;
                if (c2 < 0 || c2 >= w) continue;
                const int a = bin[static_cast<std::size_t>(r) * w + c];
                if (a < 0) continue;
                const int b = bin[static_cast<std::size_t>(r2) * w + c2];
                if (b < 0) continue;
                counts(a, b) += 1.0;
                ++pair_count;
                if (config.symmetric) {
                    counts(b, a) += 1.0;
                    ++pair_count;
                }
            }
        }
    }
    if (pair_count == 0)
        throw NumericalError("no co-occurring pairs at distance " +
                             std::to_string(config.distance) + " in slice '" + slice.slice_id +
                             "'");

    GlcmMatrix out;
    out.probs = counts / static_cast<double>(pair_count);
    out.pair_count = pair_count;
    return out;
}

std::array<double, kHaralickCount> haralick_features(const GlcmMatrix& glcm) {
    const Eigen::MatrixXd& p = glcm.probs;
    const int L = static_cast<int>(p.rows());

    Eigen::VectorXd px = p.rowwise().sum();
    Eigen::VectorXd py = p.colwise().sum();

    double mu_x = 0.0, mu_y = 0.0;
    for (int i = 0; i < L; ++i) {
        mu_x += i * px(i);
        mu_y += i * py(i);
    }
    double var_x = 0.0, var_y = 0.0;
    for (int i = 0; i < L; ++i) {
        var_x += (i - mu_x) * (i - mu_x) * px(i);
        var_y += (i - mu_y) * (i - mu_y) * py(i);
    }
    const double sigma_x = std::sqrt(var_x);
    const double sigma_y = std::sqrt(var_y);

    std::vector<double> p_sum(2 * L - 1, 0.0); // p_{x+y}, k = i+j in [0, 2L-2]
    std::vector<double> p_diff(L, 0.0);        // p_{x-y}, k = |i-j| in [0, L-1]

    double asm_v = 0.0, contrast = 0.0, idm = 0.0, entropy = 0.0, max_p = 0.0, cross = 0.0;
    for (int i = 0; i < L; ++i) {
        for (int j = 0; j < L; ++j) {
            const double v = p(i, j);
            if (v == 0.0) continue;
            const int d = i - j;
            asm_v += v * v;
            contrast += static_cast<double>(d) * d * v;
            idm += v / (1.0 + static_cast<double>(d) * d);
            entropy -= plogp(v);
            cross += static_cast<double>(i) * j * v;
            max_p = std::max(max_p, v);
            p_sum[i + j] += v;
            p_diff[d < 0 ? -d : d] += v;
        }
    }

    const double sigma_xy = sigma_x * sigma_y;
    const double correlation = sigma_xy == 0.0 ? 0.0 : (cross - mu_x * mu_y) / sigma_xy;

    // Variance about the marginal mean.
    double variance = 0.0;
    for (int i = 0; i < L; ++i) variance += (i - mu_x) * (i - mu_x) * px(i);

    double sum_average = 0.0, sum_entropy = 0.0;
    for (std::size_t k = 0; k < p_sum.size(); ++k) {
        sum_average += static_cast<double>(k) * p_sum[k];
        sum_entropy -= plogp(p_sum[k]);
    }
    double sum_variance = 0.0;
    for (std::size_t k = 0; k < p_sum.size(); ++k)
        sum_variance += (static_cast<double>(k) - sum_average) *
                        (static_cast<double>(k) - sum_average) * p_sum[k];

    double diff_mean = 0.0, diff_entropy = 0.0;
    for (std::size_t k = 0; k < p_diff.size(); ++k) {
        diff_mean += static_cast<double>(k) * p_diff[k];
        diff_entropy -= plogp(p_diff[k]);
    }
    double diff_variance = 0.0;
    for (std::size_t k = 0; k < p_diff.size(); ++k)
        diff_variance += (static_cast<double>(k) - diff_mean) *
                         (static_cast<double>(k) - diff_mean) * p_diff[k];

    return {asm_v,        contrast,    correlation,  variance,
            idm,          sum_average, sum_variance, sum_entropy,
            entropy,      diff_variance, diff_entropy, max_p};
}

HandcraftedVector extract_handcrafted(const data::MriSlice& slice,
                                      const std::vector<GlcmConfig>& configs) {
    if (configs.size() != 3)
        throw ConfigError("extract_handcrafted expects exactly three GLCM configs");
    for (std::size_t i = 1; i < configs.size(); ++i)
        if (configs[i].distance <= configs[i - 1].distance)
            throw ConfigError("GLCM distances must be strictly ascending");

    HandcraftedVector out;
    RoiStats stats = roi_statistics(slice);
    std::copy(stats.values.begin(), stats.values.end(), out.values.begin());
    out.stats_degenerate = stats.degenerate;

    for (std::size_t k = 0; k < configs.size(); ++k) {
        const std::size_t base = kStatCount + k * kHaralickCount;
        try {
            GlcmMatrix glcm = compute_glcm(slice, configs[k]);
            auto h = haralick_features(glcm);
            std::copy(h.begin(), h.end(), out.values.begin() + base);
        } catch (const NumericalError&) {
            std::fill(out.values.begin() + base, out.values.begin() + base + kHaralickCount, 0.0);
            out.glcm_no_pairs[k] = true;
        }
    }
    return out;
}

std::vector<GlcmConfig> default_glcm_configs(int levels) {
    std::vector<GlcmConfig> out;
    for (int d : kDefaultDistances) out.emplace_back(d, levels);
    return out;
}

const std::array<std::string, kHandcraftedCount>& handcrafted_names() {
    static const std::array<std::string, kHandcraftedCount> names = [] {
        std::array<std::string, kHandcraftedCount> n;
        const std::array<std::string, kStatCount> stats = {
            "area", "min", "max", "mean", "std", "skewness", "kurtosis", "p25", "median", "p75"};
        std::size_t idx = 0;
        for (const auto& s : stats) n[idx++] = s;
        for (int d : kDefaultDistances)
            for (const auto& h : kHaralickNames) n[idx++] = h + "_d" + std::to_string(d);
        return n;
    }();
    return names;
}

} // namespace tfus::features
