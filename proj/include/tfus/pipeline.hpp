#pragma once

#include <array>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "tfus/data_model.hpp"
#include "tfus/features.hpp"
#include "tfus/lasso.hpp"
#include "tfus/regressors.hpp"

namespace tfus::pipeline {

inline constexpr int kFusedDim = data::kDeepReducedDim + features::kHandcraftedCount; // 246

// [0..199] deep principal components, [200..245] hand-crafted block.
Eigen::VectorXd fuse(const Eigen::VectorXd& deep, const features::HandcraftedVector& hand);

// Fused rows addressable by slice id.
struct FusedTable {
    std::vector<std::string> slice_ids;
    std::unordered_map<std::string, long> index;
    Eigen::MatrixXd rows; // n x 246

    void add(const std::string& slice_id, const Eigen::VectorXd& fused);
    bool has(const std::string& slice_id) const { return index.count(slice_id) != 0; }
    Eigen::VectorXd row(const std::string& slice_id) const;
    static FusedTable with_capacity(long n);
};

// Sort ascending, drop floor(trim * n) items from each end, mean the rest.
double trimmed_mean(std::vector<double> scores, double trim);
// Count-based alternative: drop exactly k items from each end.
double trimmed_mean_count(std::vector<double> scores, int k);

struct TrimSpec {
    enum class Mode { Fraction, Count };
    Mode mode = Mode::Fraction;
    double fraction = 0.025; // the default 2.5% hinge per tail
    int count = 0;

    double apply(std::vector<double> scores) const;
};

struct ParameterModel {
    data::Param param = data::Param::SCT;
    lasso::LassoModel selector;
    reg::TrainedRegressor regressor;
    double trim = 0.025;

    // Lasso-selected projection of a fused row, then the regressor.
    double score_slice(const Eigen::VectorXd& fused, bool clamp_17 = false) const;
};

struct StudyAssessment {
    std::string study_id;
    std::string patient_id;
    data::Timepoint timepoint = data::Timepoint::pre;
    std::array<double, data::kNumParams> h{};
    std::array<std::vector<double>, data::kNumParams> slice_scores; // audit trail
};

StudyAssessment assess_study(const std::array<ParameterModel, data::kNumParams>& models,
                             const data::StudyRecord& study, const FusedTable& features,
                             const TrimSpec& trim, bool clamp_17 = false);

// Slice-level design matrix for one parameter: every slice carries its
// study's label.
struct SliceDataset {
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
    std::vector<std::string> slice_ids;
};
SliceDataset collect_slices(const data::CohortManifest& manifest, const FusedTable& features,
                            data::Param param);

ParameterModel train_parameter_model(const data::CohortManifest& train_manifest,
                                     const FusedTable& features, data::Param param,
                                     const lasso::LassoConfig& lasso_config, reg::Kind kind,
                                     const reg::FitParams& fit_params, std::uint64_t seed,
                                     double trim = 0.025);

// --- Evaluation -----------------------------------------------------------

struct StudyOutcome {
    std::string patient_id;
    std::string study_id;
    double predicted_h = 0.0;
    double ground_truth = 0.0;
};

struct EvalCell {
    double mae = 0.0;
    double mae_sem = 0.0;     // standard error of the mean absolute error
    double max_ae = 0.0;
    double fisher_corr = 0.0; // NaN when no patient qualifies
    int n_studies = 0;
    int n_corr_patients = 0;
    int n_corr_excluded = 0;  // <2 studies or zero-variance sequence
};

// MAE +- SEM and MAX-AE over studies; correlation aggregated per patient via
// Fisher z (atanh, clamped at 1 - 1e-7), back-transformed with tanh.
EvalCell evaluate(const std::vector<StudyOutcome>& outcomes);

double pearson(const std::vector<double>& a, const std::vector<double>& b); // NaN if degenerate
double fisher_aggregate(const std::vector<double>& correlations);

// --- Cross-validation -----------------------------------------------------

struct CvGrid {
    std::vector<double> alphas;
    std::vector<reg::Kind> kinds;
};

struct CvCell {
    double alpha = 0.0;
    reg::Kind kind = reg::Kind::LR;
    std::array<EvalCell, data::kNumParams> per_param; // fold means
};

// Per fold: train on the union of the other folds, apply Eq. 1 per held-out
// study, score study-level H against ground truth; cells hold fold means.
// Throws DataError if any patient would appear on both sides of a fold.
std::vector<CvCell> cross_validate(const data::CohortManifest& manifest,
                                   const FusedTable& features,
                                   const std::vector<std::set<std::string>>& folds,
                                   const CvGrid& grid, const lasso::LassoConfig& lasso_base,
                                   const reg::FitParams& fit_params, const TrimSpec& trim,
                                   std::uint64_t seed, int threads = 1);

// --- Model bundle ("TFUS") ------------------------------------------------

void save_parameter_model(const std::string& path, const ParameterModel& model,
                          std::uint64_t config_hash, std::uint64_t seed);
ParameterModel load_parameter_model(const std::string& path, std::uint64_t* config_hash = nullptr,
                                    std::uint64_t* seed = nullptr);

// --- Report rendering -----------------------------------------------------

// Aligned text table: one block of MAE / MAX-AE / Corr lines per model kind,
// one column per parameter.
std::string render_report_text(const std::vector<CvCell>& cells);
std::string render_report_csv(const std::vector<CvCell>& cells);

std::string render_selection_text(data::Param param, const lasso::SelectionReport& report);
std::string render_selection_csv_header();
std::string render_selection_csv_row(data::Param param, const lasso::SelectionReport& report);

} // namespace tfus::pipeline
