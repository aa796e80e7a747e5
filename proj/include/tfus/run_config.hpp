#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tfus/lasso.hpp"
#include "tfus/pipeline.hpp"
#include "tfus/regressors.hpp"
#include "tfus/synthgen.hpp"

namespace tfus::cli {

// Everything that defines a run lives in one JSON config file; the command
// line adds only the subcommand, paths to the config, thread count, and the
// two output toggles. All artifacts are stamped with hashes of the relevant
// config sections so stale inputs are rejected downstream.
struct RunConfig {
    // paths
    std::string manifest_path = "cohort/manifest.csv";
    std::string feature_cache_dir = "cache";
    std::string model_dir = "models";
    std::string report_dir = "reports";

    // feature extraction
    int glcm_levels = 64;
    std::vector<int> glcm_distances = {1, 5, 10};

    // selection + regression
    lasso::LassoConfig lasso;
    std::map<std::string, double> per_param_alpha; // optional per-parameter override
    reg::Kind kind = reg::Kind::SVR;
    reg::FitParams fit;

    // Eq. 1 aggregation
    double trim_fraction = 0.025;

    // seeds are explicit; there are no wall-clock defaults anywhere
    std::uint64_t seed_pipeline = 7;
    std::uint64_t seed_folds = 11;

    std::vector<std::string> holdout_patients;

    // cross-validation grid
    int cv_k = 4;
    std::vector<double> cv_alphas = {0.1};
    std::vector<reg::Kind> cv_kinds = {reg::Kind::LR, reg::Kind::Poly2, reg::Kind::SVR,
                                       reg::Kind::MLP4};

    // deep-block reduction
    int pca_components = 200;
    long pca_fit_sample = 2000; // seeded subsample cap for fitting
    std::string pca_model_path; // nonempty: load instead of fit

    // synthetic cohort generation
    synth::SynthConfig synth;
    std::string synth_out_dir = "cohort";

    static RunConfig from_file(const std::string& path);
    static RunConfig from_json_text(const std::string& text, const std::string& origin);

    std::string canonical() const; // sorted-key JSON of all semantic fields
    std::uint64_t config_hash() const;
    std::uint64_t glcm_hash() const;
    std::uint64_t pca_hash() const;   // pca section + manifest identity
    std::uint64_t train_hash() const; // everything a model bundle depends on

    std::vector<features::GlcmConfig> glcm_configs() const;
    double alpha_for(data::Param p) const;
};

} // namespace tfus::cli
