#include "tfus/pipeline.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <limits>
#include <sstream>

#include "tfus/binio.hpp"
#include "tfus/csv.hpp"
#include "tfus/errors.hpp"

namespace tfus::pipeline {

Eigen::VectorXd fuse(const Eigen::VectorXd& deep, const features::HandcraftedVector& hand) {
    if (deep.size() != data::kDeepReducedDim)
        throw DataError("fuse: deep block length " + std::to_string(deep.size()) + " != " +
                        std::to_string(data::kDeepReducedDim));
    Eigen::VectorXd out(kFusedDim);
    out.head(data::kDeepReducedDim) = deep;
    for (int i = 0; i < features::kHandcraftedCount; ++i)
        out(data::kDeepReducedDim + i) = hand.values[static_cast<std::size_t>(i)];
    if (!out.allFinite()) throw DataError("fuse: non-finite feature value");
    return out;
}

FusedTable FusedTable::with_capacity(long n) {
    FusedTable t;
    t.rows.resize(n, kFusedDim);
    return t;
}

void FusedTable::add(const std::string& slice_id, const Eigen::VectorXd& fused) {
    if (fused.size() != kFusedDim) throw DataError("fused row has wrong length");
    if (index.count(slice_id)) throw DataError("duplicate slice in fused table: " + slice_id);
    const long i = static_cast<long>(slice_ids.size());
    if (i >= rows.rows()) rows.conservativeResize(std::max<long>(16, rows.rows() * 2), kFusedDim);
    rows.row(i) = fused.transpose();
    index.emplace(slice_id, i);
    slice_ids.push_back(slice_id);
}

Eigen::VectorXd FusedTable::row(const std::string& slice_id) const {
    auto it = index.find(slice_id);
    if (it == index.end()) throw DataError("slice has no fused features: " + slice_id);
    return rows.row(it->second).transpose();
}

double trimmed_mean(std::vector<double> scores, double trim) {
    if (scores.empty()) throw DataError("trimmed_mean: empty score list");
    if (!(trim >= 0.0 && trim < 0.5)) throw ConfigError("trim fraction must be in [0, 0.5)");
    const std::size_t n = scores.size();
    const std::size_t g = static_cast<std::size_t>(std::floor(trim * static_cast<double>(n)));
    std::sort(scores.begin(), scores.end());
    double sum = 0.0;
    for (std::size_t i = g; i < n - g; ++i) sum += scores[i];
    return sum / static_cast<double>(n - 2 * g);
}

double trimmed_mean_count(std::vector<double> scores, int k) {
    if (scores.empty()) throw DataError("trimmed_mean_count: empty score list");
    if (k < 0) throw ConfigError("trim count must be nonnegative");
    if (2 * static_cast<std::size_t>(k) >= scores.size())
        throw ConfigError("trim count " + std::to_string(k) + " removes every element of " +
                          std::to_string(scores.size()));
    std::sort(scores.begin(), scores.end());
    double sum = 0.0;
    for (std::size_t i = static_cast<std::size_t>(k); i < scores.size() - k; ++i) sum += scores[i];
    return sum / static_cast<double>(scores.size() - 2 * k);
}

double TrimSpec::apply(std::vector<double> scores) const {
    return mode == Mode::Fraction ? trimmed_mean(std::move(scores), fraction)
                                  : trimmed_mean_count(std::move(scores), count);
}

double ParameterModel::score_slice(const Eigen::VectorXd& fused, bool clamp_17) const {
    if (fused.size() != kFusedDim) throw DataError("score_slice: fused row has wrong length");
    Eigen::VectorXd sub(static_cast<long>(selector.support.size()));
    for (std::size_t k = 0; k < selector.support.size(); ++k)
        sub(static_cast<long>(k)) = fused(selector.support[k]);
    double score = regressor.predict(sub);
    if (clamp_17) score = std::clamp(score, 1.0, 7.0);
    return score;
}

StudyAssessment assess_study(const std::array<ParameterModel, data::kNumParams>& models,
                             const data::StudyRecord& study, const FusedTable& features,
                             const TrimSpec& trim, bool clamp_17) {
    if (study.slices.empty()) throw DataError("study " + study.study_id() + " has no slices");
    StudyAssessment out;
    out.study_id = study.study_id();
    out.patient_id = study.patient_id;
    out.timepoint = study.timepoint;
    for (int k = 0; k < data::kNumParams; ++k) {
        const ParameterModel& pm = models[static_cast<std::size_t>(k)];
        std::vector<double>& scores = out.slice_scores[static_cast<std::size_t>(k)];
        scores.reserve(study.slices.size());
        for (const auto& slice_id : study.slices)
            scores.push_back(pm.score_slice(features.row(slice_id), clamp_17));
        const double h = trim.apply(scores);
        assert(h >= *std::min_element(scores.begin(), scores.end()) - 1e-12 &&
               h <= *std::max_element(scores.begin(), scores.end()) + 1e-12);
        out.h[static_cast<std::size_t>(k)] = h;
    }
    return out;
}

SliceDataset collect_slices(const data::CohortManifest& manifest, const FusedTable& features,
                            data::Param param) {
    SliceDataset ds;
    const std::size_t n = manifest.slice_count();
    ds.X.resize(static_cast<long>(n), kFusedDim);
    ds.y.resize(static_cast<long>(n));
    ds.slice_ids.reserve(n);
    long i = 0;
    for (const auto& study : manifest.studies) {
        const double label = study.labels[param];
        for (const auto& slice_id : study.slices) {
            ds.X.row(i) = features.row(slice_id).transpose();
            ds.y(i) = label;
            ds.slice_ids.push_back(slice_id);
            ++i;
        }
    }
    return ds;
}

ParameterModel train_parameter_model(const data::CohortManifest& train_manifest,
                                     const FusedTable& features, data::Param param,
                                     const lasso::LassoConfig& lasso_config, reg::Kind kind,
                                     const reg::FitParams& fit_params, std::uint64_t seed,
                                     double trim) {
    SliceDataset ds = collect_slices(train_manifest, features, param);
    ParameterModel model;
    model.param = param;
    model.trim = trim;
    model.selector = lasso::fit_lasso(ds.X, ds.y, lasso_config);
    if (model.selector.support.empty())
        throw DataError("alpha too large for parameter " + data::to_string(param) +
                        ": lasso selected no features");
    Eigen::MatrixXd sub(ds.X.rows(), static_cast<long>(model.selector.support.size()));
    for (std::size_t k = 0; k < model.selector.support.size(); ++k)
        sub.col(static_cast<long>(k)) = ds.X.col(model.selector.support[k]);
    model.regressor = reg::fit(kind, sub, ds.y, seed, fit_params);
    return model;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.size() < 2)
        return std::numeric_limits<double>::quiet_NaN();
    const double n = static_cast<double>(a.size());
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double saa = 0.0, sbb = 0.0, sab = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - ma;
        const double db = b[i] - mb;
        saa += da * da;
        sbb += db * db;
        sab += da * db;
    }
    if (saa == 0.0 || sbb == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return sab / std::sqrt(saa * sbb);
}

double fisher_aggregate(const std::vector<double>& correlations) {
    if (correlations.empty()) return std::numeric_limits<double>::quiet_NaN();
    constexpr double cap = 1.0 - 1e-7;
    double zsum = 0.0;
    for (double r : correlations) zsum += std::atanh(std::clamp(r, -cap, cap));
    return std::tanh(zsum / static_cast<double>(correlations.size()));
}

EvalCell evaluate(const std::vector<StudyOutcome>& outcomes) {
    if (outcomes.empty()) throw DataError("evaluate: no study outcomes");
    EvalCell cell;
    cell.n_studies = static_cast<int>(outcomes.size());

    std::vector<double> abs_errors;
    abs_errors.reserve(outcomes.size());
    for (const auto& o : outcomes) abs_errors.push_back(std::abs(o.predicted_h - o.ground_truth));
    double sum = 0.0, maxae = 0.0;
    for (double e : abs_errors) {
        sum += e;
        maxae = std::max(maxae, e);
    }
    cell.mae = sum / static_cast<double>(abs_errors.size());
    cell.max_ae = maxae;
    if (abs_errors.size() >= 2) {
        double ss = 0.0;
        for (double e : abs_errors) ss += (e - cell.mae) * (e - cell.mae);
        const double sample_sd = std::sqrt(ss / static_cast<double>(abs_errors.size() - 1));
        cell.mae_sem = sample_sd / std::sqrt(static_cast<double>(abs_errors.size()));
    }

    // Per-patient Pearson over that patient's study sequence.
    std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> by_patient;
    for (const auto& o : outcomes) {
        auto& [pred, gt] = by_patient[o.patient_id];
        pred.push_back(o.predicted_h);
        gt.push_back(o.ground_truth);
    }
    std::vector<double> rs;
    for (const auto& [patient, seqs] : by_patient) {
        if (seqs.first.size() < 2) {
            ++cell.n_corr_excluded;
            continue;
        }
        const double r = pearson(seqs.first, seqs.second);
        if (std::isnan(r)) {
            ++cell.n_corr_excluded;
            continue;
        }
        rs.push_back(r);
    }
    cell.n_corr_patients = static_cast<int>(rs.size());
    cell.fisher_corr = fisher_aggregate(rs);
    return cell;
}

// ---------------------------------------------------------------------------
// Cross-validation
// ---------------------------------------------------------------------------

namespace {

struct FoldMetrics {
    std::array<EvalCell, data::kNumParams> per_param;
};

data::CohortManifest subset_by_patients(const data::CohortManifest& manifest,
                                        const std::set<std::string>& patients) {
    data::CohortManifest out;
    for (const auto& study : manifest.studies) {
        if (!patients.count(study.patient_id)) continue;
        out.studies.push_back(study);
        for (const auto& slice_id : study.slices)
            out.sources.emplace(slice_id, manifest.sources.at(slice_id));
    }
    return out;
}

} // namespace

std::vector<CvCell> cross_validate(const data::CohortManifest& manifest,
                                   const FusedTable& features,
                                   const std::vector<std::set<std::string>>& folds,
                                   const CvGrid& grid, const lasso::LassoConfig& lasso_base,
                                   const reg::FitParams& fit_params, const TrimSpec& trim,
                                   std::uint64_t seed, int threads) {
    if (folds.size() < 2) throw ConfigError("cross-validation needs at least 2 folds");
    if (grid.alphas.empty() || grid.kinds.empty())
        throw ConfigError("cross-validation grid is empty");

    // Hard leakage guard: the training side is the union of the other folds,
    // so any overlap between folds trips this before any fitting happens.
    for (std::size_t f = 0; f < folds.size(); ++f) {
        std::set<std::string> train_patients;
        for (std::size_t g = 0; g < folds.size(); ++g)
            if (g != f) train_patients.insert(folds[g].begin(), folds[g].end());
        for (const auto& pid : folds[f]) {
            if (train_patients.count(pid))
                throw DataError("patient leakage across folds: '" + pid +
                                "' appears in both train and eval of fold " + std::to_string(f));
        }
    }

    const std::size_t n_cells = grid.alphas.size() * grid.kinds.size();
    std::vector<std::vector<FoldMetrics>> results(n_cells,
                                                  std::vector<FoldMetrics>(folds.size()));

    auto run_fold = [&](std::size_t f) {
        std::set<std::string> train_patients;
        for (std::size_t g = 0; g < folds.size(); ++g)
            if (g != f) train_patients.insert(folds[g].begin(), folds[g].end());
        data::CohortManifest train = subset_by_patients(manifest, train_patients);
        data::CohortManifest eval = subset_by_patients(manifest, folds[f]);
        if (train.studies.empty() || eval.studies.empty())
            throw DataError("fold " + std::to_string(f) + " has an empty split");

        std::size_t cell_idx = 0;
        for (double alpha : grid.alphas) {
            for (reg::Kind kind : grid.kinds) {
                lasso::LassoConfig lcfg = lasso_base;
                lcfg.alpha = alpha;
                std::array<ParameterModel, data::kNumParams> models;
                for (int k = 0; k < data::kNumParams; ++k) {
                    const auto param = static_cast<data::Param>(k);
                    models[static_cast<std::size_t>(k)] = train_parameter_model(
                        train, features, param, lcfg, kind, fit_params,
                        mix_seed(seed, f, static_cast<std::uint64_t>(k)), trim.fraction);
                }
                std::array<std::vector<StudyOutcome>, data::kNumParams> outcomes;
                for (const auto& study : eval.studies) {
                    StudyAssessment a = assess_study(models, study, features, trim);
                    for (int k = 0; k < data::kNumParams; ++k) {
                        outcomes[static_cast<std::size_t>(k)].push_back(
                            {study.patient_id, study.study_id(),
                             a.h[static_cast<std::size_t>(k)],
                             study.labels[static_cast<data::Param>(k)]});
                    }
                }
                FoldMetrics fm;
                for (int k = 0; k < data::kNumParams; ++k)
                    fm.per_param[static_cast<std::size_t>(k)] =
                        evaluate(outcomes[static_cast<std::size_t>(k)]);
                results[cell_idx][f] = fm;
                ++cell_idx;
            }
        }
    };

    if (threads <= 1 || folds.size() == 1) {
        for (std::size_t f = 0; f < folds.size(); ++f) run_fold(f);
    } else {
        std::vector<std::future<void>> jobs;
        for (std::size_t f = 0; f < folds.size(); ++f)
            jobs.push_back(std::async(std::launch::async, run_fold, f));
        for (auto& j : jobs) j.get();
    }

    // Deterministic reduction: plain means of the per-fold metrics.
    std::vector<CvCell> cells;
    std::size_t cell_idx = 0;
    for (double alpha : grid.alphas) {
        for (reg::Kind kind : grid.kinds) {
            CvCell cell;
            cell.alpha = alpha;
            cell.kind = kind;
            for (int k = 0; k < data::kNumParams; ++k) {
                EvalCell mean;
                double corr_sum = 0.0;
                int corr_n = 0;
                for (const auto& fm : results[cell_idx]) {
                    const EvalCell& e = fm.per_param[static_cast<std::size_t>(k)];
                    mean.mae += e.mae;
                    mean.mae_sem += e.mae_sem;
                    mean.max_ae += e.max_ae;
                    mean.n_studies += e.n_studies;
                    mean.n_corr_patients += e.n_corr_patients;
                    mean.n_corr_excluded += e.n_corr_excluded;
                    if (!std::isnan(e.fisher_corr)) {
                        corr_sum += e.fisher_corr;
                        ++corr_n;
                    }
                }
                const double nf = static_cast<double>(results[cell_idx].size());
                mean.mae /= nf;
                mean.mae_sem /= nf;
                mean.max_ae /= nf;
                mean.fisher_corr = corr_n > 0 ? corr_sum / corr_n
                                              : std::numeric_limits<double>::quiet_NaN();
                cell.per_param[static_cast<std::size_t>(k)] = mean;
            }
            cells.push_back(std::move(cell));
            ++cell_idx;
        }
    }
    return cells;
}

// ---------------------------------------------------------------------------
// Model bundle
// ---------------------------------------------------------------------------

namespace {

constexpr std::uint32_t kBundleVersion = 1;

void write_lasso(std::ostream& os, const lasso::LassoModel& m) {
    write_f64le(os, m.intercept);
    write_u32le(os, static_cast<std::uint32_t>(m.coefficients.size()));
    for (long i = 0; i < m.coefficients.size(); ++i) write_f64le(os, m.coefficients(i));
    for (long i = 0; i < m.feature_mean.size(); ++i) write_f64le(os, m.feature_mean(i));
    for (long i = 0; i < m.feature_scale.size(); ++i) write_f64le(os, m.feature_scale(i));
    write_u32le(os, static_cast<std::uint32_t>(m.support.size()));
    for (int idx : m.support) write_u32le(os, static_cast<std::uint32_t>(idx));
}

lasso::LassoModel read_lasso(std::istream& is) {
    lasso::LassoModel m;
    m.intercept = read_f64le(is);
    const std::uint32_t p = read_u32le(is);
    m.coefficients.resize(p);
    m.feature_mean.resize(p);
    m.feature_scale.resize(p);
    for (std::uint32_t i = 0; i < p; ++i) m.coefficients(i) = read_f64le(is);
    for (std::uint32_t i = 0; i < p; ++i) m.feature_mean(i) = read_f64le(is);
    for (std::uint32_t i = 0; i < p; ++i) m.feature_scale(i) = read_f64le(is);
    const std::uint32_t ns = read_u32le(is);
    m.support.resize(ns);
    for (std::uint32_t i = 0; i < ns; ++i) m.support[i] = static_cast<int>(read_u32le(is));
    return m;
}

} // namespace

void save_parameter_model(const std::string& path, const ParameterModel& model,
                          std::uint64_t config_hash, std::uint64_t seed) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw DataError("cannot write model bundle: " + path);
    write_magic(os, "TFUS");
    write_u32le(os, kBundleVersion);
    write_u64le(os, config_hash);
    write_u64le(os, seed);
    write_u32le(os, static_cast<std::uint32_t>(model.param));
    write_f64le(os, model.trim);
    write_lasso(os, model.selector);
    reg::save(os, model.regressor);
    if (!os) throw DataError("short write on model bundle: " + path);
}

ParameterModel load_parameter_model(const std::string& path, std::uint64_t* config_hash,
                                    std::uint64_t* seed) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DataError("cannot open model bundle: " + path);
    expect_magic(is, "TFUS", "model bundle");
    const std::uint32_t version = read_u32le(is);
    if (version != kBundleVersion)
        throw DataError("unsupported model bundle version " + std::to_string(version) + " in " +
                        path);
    const std::uint64_t hash = read_u64le(is);
    const std::uint64_t s = read_u64le(is);
    if (config_hash) *config_hash = hash;
    if (seed) *seed = s;
    ParameterModel model;
    const std::uint32_t param = read_u32le(is);
    if (param >= data::kNumParams) throw DataError("invalid parameter tag in " + path);
    model.param = static_cast<data::Param>(param);
    model.trim = read_f64le(is);
    model.selector = read_lasso(is);
    model.regressor = reg::load(is);
    if (model.regressor.input_dim() != static_cast<int>(model.selector.support.size()))
        throw DataError("model bundle inconsistent: regressor input dim != lasso support size");
    return model;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

namespace {

std::string fmt2(double v) {
    if (std::isnan(v)) return "n/a";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

} // namespace

std::string render_report_text(const std::vector<CvCell>& cells) {
    std::ostringstream os;
    const int name_w = 10, metric_w = 8, col_w = 12;
    os << std::string(name_w, ' ') << std::string(metric_w, ' ');
    for (data::Param p : data::kParams) {
        std::string h = data::to_string(p);
        os << h << std::string(col_w - h.size(), ' ');
    }
    os << "\n";
    for (const auto& cell : cells) {
        std::string label = reg::to_string(cell.kind);
        if (cells.size() > 1) label += "@" + csv::format_double(cell.alpha);
        const std::array<std::string, 3> metric_names = {"MAE", "MAX-AE", "Corr"};
        for (int line = 0; line < 3; ++line) {
            std::string name = line == 0 ? label : "";
            name.resize(name_w, ' ');
            std::string metric = metric_names[static_cast<std::size_t>(line)];
            metric.resize(metric_w, ' ');
            os << name << metric;
            for (int k = 0; k < data::kNumParams; ++k) {
                const EvalCell& e = cell.per_param[static_cast<std::size_t>(k)];
                std::string v;
                if (line == 0) v = fmt2(e.mae) + "±" + fmt2(e.mae_sem);
                else if (line == 1) v = fmt2(e.max_ae);
                else v = fmt2(e.fisher_corr);
                os << v;
                const std::size_t printed = line == 0 ? v.size() - 2 : v.size(); // utf8 plus-minus
                if (printed < col_w) os << std::string(col_w - printed, ' ');
            }
            os << "\n";
        }
        os << "\n";
    }
    return os.str();
}

std::string render_report_csv(const std::vector<CvCell>& cells) {
    std::ostringstream os;
    os << "kind,alpha,parameter,mae,mae_sem,max_ae,fisher_corr,n_studies,n_corr_patients,"
          "n_corr_excluded\n";
    for (const auto& cell : cells) {
        for (int k = 0; k < data::kNumParams; ++k) {
            const EvalCell& e = cell.per_param[static_cast<std::size_t>(k)];
            os << reg::to_string(cell.kind) << ',' << csv::format_double(cell.alpha) << ','
               << data::to_string(static_cast<data::Param>(k)) << ','
               << csv::format_double(e.mae) << ',' << csv::format_double(e.mae_sem) << ','
               << csv::format_double(e.max_ae) << ','
               << (std::isnan(e.fisher_corr) ? "nan" : csv::format_double(e.fisher_corr)) << ','
               << e.n_studies << ',' << e.n_corr_patients << ',' << e.n_corr_excluded << "\n";
        }
    }
    return os.str();
}

std::string render_selection_text(data::Param param, const lasso::SelectionReport& report) {
    std::ostringstream os;
    os << data::to_string(param) << ": " << report.summary();
    if (!report.deep.empty()) {
        os << "; DL indices:";
        for (int idx : report.deep) os << " pc" << idx;
    }
    if (!report.handcrafted_names.empty()) {
        os << "; hand-crafted:";
        for (const auto& n : report.handcrafted_names) os << " " << n;
    }
    return os.str();
}

std::string render_selection_csv_header() {
    return "parameter,n_deep,n_handcrafted,deep_indices,handcrafted_names";
}

std::string render_selection_csv_row(data::Param param, const lasso::SelectionReport& report) {
    std::string deep, hand;
    for (std::size_t i = 0; i < report.deep.size(); ++i)
        deep += (i ? ";" : "") + std::to_string(report.deep[i]);
    for (std::size_t i = 0; i < report.handcrafted_names.size(); ++i)
        hand += (i ? ";" : "") + report.handcrafted_names[i];
    return csv::join_line({data::to_string(param), std::to_string(report.deep.size()),
                           std::to_string(report.handcrafted.size()), deep, hand});
}

} // namespace tfus::pipeline
