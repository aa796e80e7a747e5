#include "tfus/synthgen.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "tfus/binio.hpp"
#include "tfus/csv.hpp"
#include "tfus/errors.hpp"
#include "tfus/pgm.hpp"
#include "tfus/rng.hpp"

namespace fs = std::filesystem;

namespace tfus::synth {

namespace {

// Deep coefficient scales, strictly decreasing; Sum tau^2 ~= (10 * 0.01 * 64)^2
// so the default sigma = 0.01 gives a 10:1 sample signal-to-noise ratio at
// 4096 dims.
constexpr std::array<double, kDeepRank> kTauSq = {14.33, 9.00, 6.55, 4.92, 3.69, 2.46};

// Per-parameter label slopes; bases are all 4.0.
constexpr std::array<double, data::kNumParams> kSlope = {0.85, 0.80, 0.70, 0.75, 0.78, 0.82};

// Parameter-specific deep factor triples (indices into u2..u6, i.e. 0..4).
constexpr std::array<std::array<int, 3>, data::kNumParams> kDeepTriple = {{
    {0, 1, 2}, // SCT: u2,u3,u4
    {0, 1, 3}, // TT:  u2,u3,u5
    {0, 2, 4}, // STE: u2,u4,u6
    {1, 2, 4}, // TE:  u3,u4,u6
    {1, 3, 4}, // TU:  u3,u5,u6
    {2, 3, 4}, // TisE:u4,u5,u6
}};

constexpr double kFactorWeight = 0.25;

double severity_z(double s) { return (s - 4.0) / 1.8; }

std::string format_float(double v) {
    char buf[32];
    auto r = std::to_chars(buf, buf + sizeof buf, static_cast<float>(v));
    return std::string(buf, r.ptr);
}

Eigen::MatrixXd orthonormal_basis(int dim, int rank, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Eigen::MatrixXd g(dim, rank);
    for (int c = 0; c < rank; ++c)
        for (int r = 0; r < dim; ++r) g(r, c) = rnorm(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(dim, rank);
    return q;
}

struct SliceArtifacts {
    pgm::Image16 image;
    pgm::Image8 mask;
};

SliceArtifacts make_slice_image(const SynthConfig& cfg, const StudyLatents& lat,
                                std::mt19937_64& rng) {
    const int w = cfg.width;
    const int h = cfg.height;
    const double z = severity_z(lat.severity);

    // ROI ellipse: area affine in (z, v_area) plus a small per-slice jitter.
    const double area_factor =
        std::max(0.25, 1.0 + 0.22 * z + 0.22 * lat.v_area + 0.03 * rnorm(rng));
    const double area_target = 0.11 * w * h * area_factor;
    const double ratio = runif(rng, 0.75, 1.30);
    const double rx = std::sqrt(area_target * ratio / M_PI);
    const double ry = std::sqrt(area_target / (ratio * M_PI));
    const double cx = 0.5 * w + runif(rng, -0.06, 0.06) * w;
    const double cy = 0.5 * h + runif(rng, -0.06, 0.06) * h;

    // Brightness affine in (z, v_mean); texture mixes a coarse and a fine
    // noise field with a severity-driven weight, which survives the ROI
    // min-max quantization where a pure amplitude change would not.
    const double mu = 8000.0 + 1400.0 * z + 1400.0 * lat.v_mean + 30.0 * rnorm(rng);
    const double mix = std::clamp(0.5 + 0.26 * z, 0.02, 0.98);
    const double sigma_px = cfg.noise_sigma * 20000.0;

    const int gw = w / 4 + 2;
    const int gh = h / 4 + 2;
    std::vector<double> coarse_grid(static_cast<std::size_t>(gw) * gh);
    for (auto& v : coarse_grid) v = rnorm(rng);
    auto coarse_at = [&](int r, int c) {
        const double fr = r / 4.0;
        const double fc = c / 4.0;
        const int r0 = static_cast<int>(fr);
        const int c0 = static_cast<int>(fc);
        const double ar = fr - r0;
        const double ac = fc - c0;
        const double* g = coarse_grid.data();
        const double v00 = g[r0 * gw + c0];
        const double v01 = g[r0 * gw + c0 + 1];
        const double v10 = g[(r0 + 1) * gw + c0];
        const double v11 = g[(r0 + 1) * gw + c0 + 1];
        return (1 - ar) * ((1 - ac) * v00 + ac * v01) + ar * ((1 - ac) * v10 + ac * v11);
    };

    SliceArtifacts out;
    out.image.width = w;
    out.image.height = h;
    out.image.pixels.resize(static_cast<std::size_t>(w) * h);
    out.mask.width = w;
    out.mask.height = h;
    out.mask.pixels.assign(static_cast<std::size_t>(w) * h, 0);

    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const double dr = (r - cy) / ry;
            const double dc = (c - cx) / rx;
            const bool inside = dr * dr + dc * dc <= 1.0;
            double v;
            if (inside) {
                const double tex = (1.0 - mix) * coarse_at(r, c) + mix * rnorm(rng);
                v = mu + 900.0 * tex + sigma_px * rnorm(rng);
                out.mask.pixels[static_cast<std::size_t>(r) * w + c] = 255;
            } else {
                v = 1500.0 + 150.0 * rnorm(rng);
            }
            out.image.pixels[static_cast<std::size_t>(r) * w + c] =
                static_cast<std::uint16_t>(std::clamp(std::round(v), 0.0, 65535.0));
        }
    }
    // The mask is never empty: center pixel is forced into the ROI.
    const int mr = std::clamp(static_cast<int>(cy), 0, h - 1);
    const int mc = std::clamp(static_cast<int>(cx), 0, w - 1);
    out.mask.pixels[static_cast<std::size_t>(mr) * w + mc] = 255;
    return out;
}

std::vector<double> make_deep_block(const SynthConfig& cfg, const Eigen::MatrixXd& basis,
                                    const StudyLatents& lat, std::mt19937_64& rng) {
    Eigen::VectorXd coeff(kDeepRank);
    coeff(0) = std::sqrt(kTauSq[0]) * severity_z(lat.severity);
    for (int j = 1; j < kDeepRank; ++j)
        coeff(j) = std::sqrt(kTauSq[static_cast<std::size_t>(j)]) * lat.deep_factors[j - 1];
    for (int j = 0; j < kDeepRank; ++j)
        coeff(j) += 0.05 * std::sqrt(kTauSq[static_cast<std::size_t>(j)]) * rnorm(rng);

    Eigen::VectorXd x = basis * coeff;
    std::vector<double> out(static_cast<std::size_t>(cfg.deep_dim));
    for (int i = 0; i < cfg.deep_dim; ++i) out[static_cast<std::size_t>(i)] = x(i) + cfg.noise_sigma * rnorm(rng);
    return out;
}

} // namespace

void SynthConfig::validate() const {
    if (n_patients < 1) throw ConfigError("synth: n_patients must be positive");
    if (studies_per_patient < 1 || studies_per_patient > 10)
        throw ConfigError("synth: studies_per_patient must be in [1, 10]");
    if (slices_min < 1 || slices_max < slices_min)
        throw ConfigError("synth: invalid slices range");
    if (width < 8 || height < 8) throw ConfigError("synth: image size must be at least 8x8");
    if (noise_sigma < 0.0) throw ConfigError("synth: noise_sigma must be nonnegative");
    if (deep_dim < kDeepRank) throw ConfigError("synth: deep_dim must be >= 6");
}

std::uint64_t SynthConfig::hash() const {
    std::string repr = std::to_string(n_patients) + "," + std::to_string(studies_per_patient) +
                       "," + std::to_string(slices_min) + "," + std::to_string(slices_max) + "," +
                       std::to_string(width) + "x" + std::to_string(height) + ",sigma=" +
                       csv::format_double(noise_sigma) + ",deep=" + std::to_string(deep_dim) +
                       ",seed=" + std::to_string(seed);
    return fnv1a64(repr);
}

double true_label(data::Param p, const StudyLatents& latents) {
    const int k = static_cast<int>(p);
    double v = 4.0 + kSlope[static_cast<std::size_t>(k)] * (latents.severity - 4.0);
    for (int j : kDeepTriple[static_cast<std::size_t>(k)])
        v += kFactorWeight * latents.deep_factors[static_cast<std::size_t>(j)];
    v += kFactorWeight * latents.v_area;
    v += kFactorWeight * latents.v_mean;
    return std::clamp(v, 1.0, 7.0);
}

std::vector<std::string> planted_factors(data::Param p) {
    std::vector<std::string> out = {"severity"};
    for (int j : kDeepTriple[static_cast<std::size_t>(static_cast<int>(p))])
        out.push_back("u" + std::to_string(j + 2));
    out.push_back("v_area");
    out.push_back("v_mean");
    return out;
}

GeneratedCohort generate(const SynthConfig& config, const std::string& out_dir) {
    config.validate();
    std::error_code ec;
    fs::create_directories(fs::path(out_dir) / "images", ec);
    fs::create_directories(fs::path(out_dir) / "masks", ec);
    fs::create_directories(fs::path(out_dir) / "deep", ec);
    if (!fs::is_directory(fs::path(out_dir) / "deep"))
        throw DataError("cannot create output directory tree under " + out_dir);

    const Eigen::MatrixXd basis =
        orthonormal_basis(config.deep_dim, kDeepRank, mix_seed(config.seed, 0xB, 0, 0));

    GeneratedCohort result;
    result.manifest_path = (fs::path(out_dir) / "manifest.csv").string();
    result.ledger_path = (fs::path(out_dir) / "ledger.csv").string();
    result.factors_path = (fs::path(out_dir) / "factors.csv").string();

    std::ofstream manifest(result.manifest_path);
    std::ofstream ledger(result.ledger_path);
    std::ofstream factors(result.factors_path);
    if (!manifest || !ledger || !factors)
        throw DataError("cannot write cohort files under " + out_dir);

    manifest << "# synthgen seed=" << config.seed << " config_hash=" << config.hash() << "\n";
    manifest << "patient_id,timepoint,slice_id,image_path,mask_path,deep_path,"
                "sct,tt,ste,te,tu,tise\n";
    ledger << "patient_id,timepoint,latent_severity,sct,tt,ste,te,tu,tise\n";
    factors << "patient_id,timepoint,severity,u2,u3,u4,u5,u6,v_area,v_mean\n";

    for (int p = 0; p < config.n_patients; ++p) {
        char pid[16];
        std::snprintf(pid, sizeof pid, "P%02d", p);

        std::mt19937_64 rng_traj(mix_seed(config.seed, 1, static_cast<std::uint64_t>(p), 0));
        const double hi = 6.6 + 0.35 * runif(rng_traj);
        const double lo = 1.05 + 0.35 * runif(rng_traj);
        const double gamma = 0.7 + 0.9 * runif(rng_traj);
        const int n_studies = config.studies_per_patient;

        for (int t = 0; t < n_studies; ++t) {
            const double frac = n_studies > 1 ? static_cast<double>(t) / (n_studies - 1) : 0.0;
            StudyLatents lat;
            lat.severity = lo + (hi - lo) * (1.0 - std::pow(frac, gamma));
            if (t == 0) lat.severity = hi; // pow(0, gamma) == 0, stated explicitly

            std::mt19937_64 rng_study(
                mix_seed(config.seed, 2, static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(t)));
            for (auto& u : lat.deep_factors) u = rnorm(rng_study);
            lat.v_area = rnorm(rng_study);
            lat.v_mean = rnorm(rng_study);
            const long n_slices = rint(rng_study, config.slices_min, config.slices_max);

            data::LabelSet labels;
            for (int k = 0; k < data::kNumParams; ++k)
                labels.scores[static_cast<std::size_t>(k)] =
                    true_label(static_cast<data::Param>(k), lat);

            const std::string tp = data::to_string(data::kTimepoints[static_cast<std::size_t>(t)]);
            std::vector<std::string> lrow = {pid, tp, csv::format_double(lat.severity)};
            for (double s : labels.scores) lrow.push_back(csv::format_double(s));
            ledger << csv::join_line(lrow) << "\n";

            std::vector<std::string> frow = {pid, tp, csv::format_double(lat.severity)};
            for (double u : lat.deep_factors) frow.push_back(csv::format_double(u));
            frow.push_back(csv::format_double(lat.v_area));
            frow.push_back(csv::format_double(lat.v_mean));
            factors << csv::join_line(frow) << "\n";

            for (long i = 0; i < n_slices; ++i) {
                char sid[48];
                std::snprintf(sid, sizeof sid, "%s_%s_s%03ld", pid, tp.c_str(), i);
                std::mt19937_64 rng_slice(mix_seed(
                    config.seed, 3, static_cast<std::uint64_t>(p) * 64 + static_cast<std::uint64_t>(t),
                    static_cast<std::uint64_t>(i)));

                SliceArtifacts art = make_slice_image(config, lat, rng_slice);
                const std::string img_rel = std::string("images/") + sid + ".pgm";
                const std::string mask_rel = std::string("masks/") + sid + ".pgm";
                const std::string deep_rel = std::string("deep/") + sid + ".csv";
                pgm::write_image16((fs::path(out_dir) / img_rel).string(), art.image);
                pgm::write_image8((fs::path(out_dir) / mask_rel).string(), art.mask);

                std::vector<double> deep = make_deep_block(config, basis, lat, rng_slice);
                std::ofstream dos((fs::path(out_dir) / deep_rel).string());
                if (!dos) throw DataError("cannot write deep block " + deep_rel);
                for (std::size_t k = 0; k < deep.size(); ++k) {
                    if (k) dos << ',';
                    dos << format_float(deep[k]);
                }
                dos << "\n";

                std::vector<std::string> row = {pid, tp, sid, img_rel, mask_rel, deep_rel};
                for (double s : labels.scores) row.push_back(csv::format_double(s));
                manifest << csv::join_line(row) << "\n";
                ++result.slices;
            }
            ++result.studies;
        }
    }
    if (!manifest || !ledger || !factors)
        throw DataError("short write on cohort files under " + out_dir);
    return result;
}

Eigen::MatrixXd make_deep_activations(int n, int dim, double sigma, double snr,
                                      std::uint64_t seed) {
    if (n < 1 || dim < kDeepRank) throw ConfigError("make_deep_activations: bad shape");
    const Eigen::MatrixXd basis = orthonormal_basis(dim, kDeepRank, mix_seed(seed, 10, 0, 0));
    const double target_norm = snr * sigma * std::sqrt(static_cast<double>(dim));

    std::mt19937_64 rng(mix_seed(seed, 11, 0, 0));
    Eigen::MatrixXd out(n, dim);
    Eigen::VectorXd coeff(kDeepRank);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < kDeepRank; ++j)
            coeff(j) = std::sqrt(kTauSq[static_cast<std::size_t>(j)]) * rnorm(rng);
        if (coeff.norm() > 0.0 && target_norm > 0.0) coeff *= target_norm / coeff.norm();
        Eigen::VectorXd x = basis * coeff;
        for (int c = 0; c < dim; ++c) out(i, c) = x(c) + sigma * rnorm(rng);
    }
    return out;
}

} // namespace tfus::synth
