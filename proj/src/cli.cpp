#include "tfus/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <random>
#include <sstream>
#include <unordered_map>

#include "CLI11.hpp"

#include "tfus/binio.hpp"
#include "tfus/csv.hpp"
#include "tfus/data_model.hpp"
#include "tfus/errors.hpp"
#include "tfus/features.hpp"
#include "tfus/pca.hpp"
#include "tfus/pipeline.hpp"
#include "tfus/run_config.hpp"

namespace fs = std::filesystem;

namespace tfus::cli {

namespace {

// ---------------------------------------------------------------------------
// Artifact stamps: "# key=value key=value" comment lines.
// ---------------------------------------------------------------------------

std::string make_stamp(const std::vector<std::pair<std::string, std::string>>& kv) {
    std::string s;
    for (const auto& [k, v] : kv) {
        if (!s.empty()) s += ' ';
        s += k + "=" + v;
    }
    return s;
}

std::unordered_map<std::string, std::string> parse_stamps(
    const std::vector<std::string>& comments) {
    std::unordered_map<std::string, std::string> out;
    for (const auto& line : comments) {
        std::istringstream is(line.substr(1)); // strip '#'
        std::string tok;
        while (is >> tok) {
            auto eq = tok.find('=');
            if (eq != std::string::npos) out[tok.substr(0, eq)] = tok.substr(eq + 1);
        }
    }
    return out;
}

void require_stamp(const std::unordered_map<std::string, std::string>& stamps,
                   const std::string& key, std::uint64_t expected, const std::string& path) {
    auto it = stamps.find(key);
    if (it == stamps.end())
        throw DataError("artifact " + path + " has no '" + key + "' stamp; refusing to use it");
    if (it->second != std::to_string(expected))
        throw DataError("artifact " + path + " was produced under a different configuration (" +
                        key + " " + it->second + " != " + std::to_string(expected) +
                        "); re-run the producing subcommand");
}

// ---------------------------------------------------------------------------
// Feature caches
// ---------------------------------------------------------------------------

using HandMap = std::unordered_map<std::string, std::array<double, features::kHandcraftedCount>>;
using DeepMap = std::unordered_map<std::string, Eigen::VectorXd>;

std::string features_cache_path(const RunConfig& cfg) {
    return (fs::path(cfg.feature_cache_dir) / "features.csv").string();
}
std::string deep_cache_path(const RunConfig& cfg) {
    return (fs::path(cfg.feature_cache_dir) / "deep200.csv").string();
}

HandMap read_feature_cache(const std::string& path, std::uint64_t expected_glcm_hash) {
    csv::Table t = csv::read_file(path);
    require_stamp(parse_stamps(t.comments), "glcm_hash", expected_glcm_hash, path);
    if (t.header.size() != 1 + features::kHandcraftedCount)
        throw DataError("feature cache has wrong column count: " + path);
    HandMap out;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& row = t.rows[i];
        if (row.size() != t.header.size())
            throw DataError("feature cache row " + std::to_string(t.row_lines[i]) +
                            " malformed in " + path);
        std::array<double, features::kHandcraftedCount> vals{};
        for (int k = 0; k < features::kHandcraftedCount; ++k)
            vals[static_cast<std::size_t>(k)] =
                csv::parse_double(row[static_cast<std::size_t>(k) + 1], path);
        out.emplace(row[0], vals);
    }
    return out;
}

DeepMap read_deep_cache(const std::string& path, std::uint64_t expected_pca_hash) {
    csv::Table t = csv::read_file(path);
    require_stamp(parse_stamps(t.comments), "pca_hash", expected_pca_hash, path);
    if (t.header.size() != 1 + data::kDeepReducedDim)
        throw DataError("deep cache has wrong column count: " + path);
    DeepMap out;
    for (const auto& row : t.rows) {
        if (row.size() != t.header.size()) throw DataError("deep cache row malformed in " + path);
        Eigen::VectorXd v(data::kDeepReducedDim);
        for (int k = 0; k < data::kDeepReducedDim; ++k)
            v(k) = csv::parse_double(row[static_cast<std::size_t>(k) + 1], path);
        out.emplace(row[0], std::move(v));
    }
    return out;
}

pipeline::FusedTable build_fused_table(const data::CohortManifest& manifest, const HandMap& hand,
                                       const DeepMap& deep) {
    pipeline::FusedTable table =
        pipeline::FusedTable::with_capacity(static_cast<long>(manifest.slice_count()));
    for (const auto& study : manifest.studies) {
        for (const auto& slice_id : study.slices) {
            auto hit = hand.find(slice_id);
            if (hit == hand.end())
                throw DataError("slice " + slice_id +
                                " missing from the feature cache; run `extract` first");
            auto dit = deep.find(slice_id);
            if (dit == deep.end())
                throw DataError("slice " + slice_id +
                                " missing from the deep cache; run `pca` first");
            features::HandcraftedVector hv;
            hv.values = hit->second;
            table.add(slice_id, pipeline::fuse(dit->second, hv));
        }
    }
    return table;
}

data::CohortManifest manifest_subset(const RunConfig& cfg, const std::string& subset) {
    data::CohortManifest manifest = data::load_manifest(cfg.manifest_path);
    if (subset == "all") return manifest;
    std::set<std::string> holdout(cfg.holdout_patients.begin(), cfg.holdout_patients.end());
    auto [train, test] = data::split_test_holdout(manifest, holdout);
    if (subset == "train") return train;
    if (subset == "test") return test;
    throw ConfigError("unknown subset '" + subset + "' (expected train, test or all)");
}

std::array<pipeline::ParameterModel, data::kNumParams> load_bundles(const RunConfig& cfg) {
    std::array<pipeline::ParameterModel, data::kNumParams> models;
    for (int k = 0; k < data::kNumParams; ++k) {
        const auto param = static_cast<data::Param>(k);
        const std::string path =
            (fs::path(cfg.model_dir) / ("model_" + data::to_string(param) + ".tfus")).string();
        std::uint64_t hash = 0;
        models[static_cast<std::size_t>(k)] = pipeline::load_parameter_model(path, &hash);
        if (hash != cfg.train_hash())
            throw DataError("model bundle " + path +
                            " was trained under a different configuration (hash " +
                            std::to_string(hash) + " != " + std::to_string(cfg.train_hash()) +
                            "); re-run `train`");
        if (models[static_cast<std::size_t>(k)].param != param)
            throw DataError("model bundle " + path + " holds the wrong parameter");
    }
    return models;
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

int cmd_synth(const RunConfig& cfg) {
    synth::GeneratedCohort g = synth::generate(cfg.synth, cfg.synth_out_dir);
    std::cout << "synth: wrote " << g.studies << " studies / " << g.slices << " slices under "
              << cfg.synth_out_dir << "\n";
    std::cout << "synth: manifest " << g.manifest_path << "\n";
    return 0;
}

int cmd_extract(const RunConfig& cfg, int threads) {
    data::CohortManifest manifest = data::load_manifest(cfg.manifest_path);
    const std::string cache_path = features_cache_path(cfg);

    // Cache hit: correct stamp and full slice coverage.
    if (fs::exists(cache_path)) {
        try {
            HandMap existing = read_feature_cache(cache_path, cfg.glcm_hash());
            bool complete = true;
            for (const auto& study : manifest.studies)
                for (const auto& sid : study.slices)
                    if (!existing.count(sid)) { complete = false; break; }
            if (complete) {
                std::cout << "extract: cache hit (" << existing.size() << " slices), skipping\n";
                return 0;
            }
        } catch (const DataError&) {
            // stale or foreign cache: recompute below
        }
    }

    std::vector<std::string> slice_ids;
    for (const auto& study : manifest.studies)
        for (const auto& sid : study.slices) slice_ids.push_back(sid);

    const auto configs = cfg.glcm_configs();
    std::vector<features::HandcraftedVector> results(slice_ids.size());
    std::vector<std::string> warnings(slice_ids.size());

    auto worker = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            data::MriSlice slice = data::load_slice(manifest, slice_ids[i]);
            results[i] = features::extract_handcrafted(slice, configs);
            for (std::size_t d = 0; d < results[i].glcm_no_pairs.size(); ++d)
                if (results[i].glcm_no_pairs[d])
                    warnings[i] = "no co-occurring pairs at d=" +
                                  std::to_string(configs[d].distance) + " for " + slice_ids[i];
        }
    };
    const int n_threads = std::max(1, threads);
    if (n_threads == 1) {
        worker(0, slice_ids.size());
    } else {
        std::vector<std::future<void>> jobs;
        const std::size_t chunk = (slice_ids.size() + n_threads - 1) / n_threads;
        for (int t = 0; t < n_threads; ++t) {
            const std::size_t b = static_cast<std::size_t>(t) * chunk;
            if (b >= slice_ids.size()) break;
            jobs.push_back(std::async(std::launch::async, worker, b,
                                      std::min(slice_ids.size(), b + chunk)));
        }
        for (auto& j : jobs) j.get();
    }
    for (const auto& w : warnings)
        if (!w.empty()) std::cerr << "warning: " << w << "\n";

    fs::create_directories(cfg.feature_cache_dir);
    std::ofstream os(cache_path);
    if (!os) throw DataError("cannot write feature cache: " + cache_path);
    os << "# "
       << make_stamp({{"config_hash", std::to_string(cfg.config_hash())},
                      {"glcm_hash", std::to_string(cfg.glcm_hash())}})
       << "\n";
    os << "slice_id";
    for (const auto& name : features::handcrafted_names()) os << ',' << name;
    os << "\n";
    for (std::size_t i = 0; i < slice_ids.size(); ++i) {
        os << slice_ids[i];
        for (double v : results[i].values) os << ',' << csv::format_double(v);
        os << "\n";
    }
    std::cout << "extract: wrote " << slice_ids.size() << " slices to " << cache_path << "\n";
    return 0;
}

int cmd_pca(const RunConfig& cfg) {
    data::CohortManifest manifest = data::load_manifest(cfg.manifest_path);
    std::vector<std::string> slice_ids;
    for (const auto& study : manifest.studies)
        for (const auto& sid : study.slices) slice_ids.push_back(sid);
    if (slice_ids.empty()) throw DataError("manifest has no slices");

    // Raw 4096-dim blocks get reduced; already-reduced blocks pass through.
    data::DeepFeatureBlock first = data::load_deep_block(manifest, slice_ids.front());
    const bool reduced_input = first.kind == data::DeepKind::Reduced;

    fs::create_directories(cfg.feature_cache_dir);
    const std::string cache_path = deep_cache_path(cfg);
    std::ofstream os(cache_path);
    if (!os) throw DataError("cannot write deep cache: " + cache_path);
    os << "# "
       << make_stamp({{"config_hash", std::to_string(cfg.config_hash())},
                      {"pca_hash", std::to_string(cfg.pca_hash())}})
       << "\n";
    os << "slice_id";
    for (int k = 0; k < data::kDeepReducedDim; ++k) {
        char name[16];
        std::snprintf(name, sizeof name, ",dl%03d", k);
        os << name;
    }
    os << "\n";

    if (reduced_input) {
        for (const auto& sid : slice_ids) {
            data::DeepFeatureBlock block = data::load_deep_block(manifest, sid);
            if (block.kind != data::DeepKind::Reduced)
                throw DataError("mixed raw and reduced deep blocks in the manifest");
            os << sid;
            for (double v : block.activations) os << ',' << csv::format_double(v);
            os << "\n";
        }
        std::cout << "pca: blocks already reduced; passthrough of " << slice_ids.size()
                  << " slices\n";
        return 0;
    }

    pca::PcaModel model;
    if (!cfg.pca_model_path.empty()) {
        model = pca::load(cfg.pca_model_path);
        std::cout << "pca: loaded model " << cfg.pca_model_path << "\n";
    } else {
        // Seeded subsample cap keeps the fit tractable on large cohorts.
        std::vector<std::size_t> order(slice_ids.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::mt19937_64 rng(cfg.seed_pipeline);
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[rng() % i]);
        const std::size_t n_fit =
            std::min<std::size_t>(order.size(),
                                  static_cast<std::size_t>(std::max<long>(cfg.pca_fit_sample,
                                                                          cfg.pca_components)));
        Eigen::MatrixXd fit_data(static_cast<long>(n_fit), data::kDeepRawDim);
        for (std::size_t i = 0; i < n_fit; ++i) {
            data::DeepFeatureBlock block = data::load_deep_block(manifest, slice_ids[order[i]]);
            if (block.kind != data::DeepKind::Fc6Raw)
                throw DataError("mixed raw and reduced deep blocks in the manifest");
            for (int c = 0; c < data::kDeepRawDim; ++c)
                fit_data(static_cast<long>(i), c) = block.activations[static_cast<std::size_t>(c)];
        }
        model = pca::fit_pca(fit_data, cfg.pca_components);
        fs::create_directories(cfg.model_dir);
        const std::string model_path = (fs::path(cfg.model_dir) / "pca.pcam").string();
        pca::save(model, model_path);
        std::cout << "pca: fit on " << n_fit << " slices, saved " << model_path
                  << " (top ratio " << csv::format_double(model.explained_variance_ratio(0))
                  << ")\n";
    }
    if (model.out_dim() != data::kDeepReducedDim)
        throw ConfigError("pca model emits " + std::to_string(model.out_dim()) +
                          " components; the fused layout needs " +
                          std::to_string(data::kDeepReducedDim));

    Eigen::VectorXd raw(data::kDeepRawDim);
    for (const auto& sid : slice_ids) {
        data::DeepFeatureBlock block = data::load_deep_block(manifest, sid);
        if (block.kind != data::DeepKind::Fc6Raw)
            throw DataError("mixed raw and reduced deep blocks in the manifest");
        for (int c = 0; c < data::kDeepRawDim; ++c)
            raw(c) = block.activations[static_cast<std::size_t>(c)];
        Eigen::VectorXd reduced = pca::transform(model, raw);
        os << sid;
        for (int k = 0; k < reduced.size(); ++k) os << ',' << csv::format_double(reduced(k));
        os << "\n";
    }
    std::cout << "pca: reduced " << slice_ids.size() << " slices to " << cache_path << "\n";
    return 0;
}

int cmd_train(const RunConfig& cfg) {
    data::CohortManifest train = manifest_subset(cfg, "train");
    HandMap hand = read_feature_cache(features_cache_path(cfg), cfg.glcm_hash());
    DeepMap deep = read_deep_cache(deep_cache_path(cfg), cfg.pca_hash());
    pipeline::FusedTable table = build_fused_table(train, hand, deep);

    fs::create_directories(cfg.model_dir);
    fs::create_directories(cfg.report_dir);
    std::ofstream sel_txt((fs::path(cfg.report_dir) / "selected_features.txt").string());
    std::ofstream sel_csv((fs::path(cfg.report_dir) / "selected_features.csv").string());
    sel_csv << "# " << make_stamp({{"config_hash", std::to_string(cfg.config_hash())}}) << "\n";
    sel_csv << pipeline::render_selection_csv_header() << "\n";

    for (int k = 0; k < data::kNumParams; ++k) {
        const auto param = static_cast<data::Param>(k);
        lasso::LassoConfig lcfg = cfg.lasso;
        lcfg.alpha = cfg.alpha_for(param);
        const std::uint64_t seed = mix_seed(cfg.seed_pipeline, 100, static_cast<std::uint64_t>(k));
        pipeline::ParameterModel model = pipeline::train_parameter_model(
            train, table, param, lcfg, cfg.kind, cfg.fit, seed, cfg.trim_fraction);
        const std::string path =
            (fs::path(cfg.model_dir) / ("model_" + data::to_string(param) + ".tfus")).string();
        pipeline::save_parameter_model(path, model, cfg.train_hash(), seed);

        lasso::SelectionReport rep = lasso::selected_features(model.selector);
        const std::string line = pipeline::render_selection_text(param, rep);
        sel_txt << line << "\n";
        sel_csv << pipeline::render_selection_csv_row(param, rep) << "\n";
        std::cout << "train: " << line << "\n";
    }
    std::cout << "train: bundles in " << cfg.model_dir << ", kind " << reg::to_string(cfg.kind)
              << "\n";
    return 0;
}

int cmd_cv(const RunConfig& cfg, int threads) {
    data::CohortManifest train = manifest_subset(cfg, "train");
    HandMap hand = read_feature_cache(features_cache_path(cfg), cfg.glcm_hash());
    DeepMap deep = read_deep_cache(deep_cache_path(cfg), cfg.pca_hash());
    pipeline::FusedTable table = build_fused_table(train, hand, deep);

    auto folds = data::make_folds(train, cfg.cv_k, cfg.seed_folds);
    pipeline::CvGrid grid{cfg.cv_alphas, cfg.cv_kinds};
    pipeline::TrimSpec trim;
    trim.fraction = cfg.trim_fraction;
    auto cells = pipeline::cross_validate(train, table, folds, grid, cfg.lasso, cfg.fit, trim,
                                          cfg.seed_pipeline, threads);

    fs::create_directories(cfg.report_dir);
    const std::string txt_path = (fs::path(cfg.report_dir) / "cv_table.txt").string();
    const std::string csv_path = (fs::path(cfg.report_dir) / "cv_table.csv").string();
    std::ofstream txt(txt_path);
    txt << "# " << make_stamp({{"config_hash", std::to_string(cfg.config_hash())}}) << "\n"
        << pipeline::render_report_text(cells);
    std::ofstream csvf(csv_path);
    csvf << "# " << make_stamp({{"config_hash", std::to_string(cfg.config_hash())}}) << "\n"
         << pipeline::render_report_csv(cells);
    std::cout << pipeline::render_report_text(cells);
    std::cout << "cv: " << cells.size() << " grid cells over " << folds.size() << " folds -> "
              << txt_path << "\n";
    return 0;
}

int cmd_assess(const RunConfig& cfg, const std::string& subset, bool clamp17, int trim_count) {
    data::CohortManifest manifest = manifest_subset(cfg, subset);
    HandMap hand = read_feature_cache(features_cache_path(cfg), cfg.glcm_hash());
    DeepMap deep = read_deep_cache(deep_cache_path(cfg), cfg.pca_hash());
    pipeline::FusedTable table = build_fused_table(manifest, hand, deep);
    auto models = load_bundles(cfg);

    pipeline::TrimSpec trim;
    if (trim_count >= 0) {
        trim.mode = pipeline::TrimSpec::Mode::Count;
        trim.count = trim_count;
    } else {
        trim.fraction = models[0].trim;
    }

    fs::create_directories(cfg.report_dir);
    const std::string path = (fs::path(cfg.report_dir) / "assessment.csv").string();
    std::ofstream os(path);
    if (!os) throw DataError("cannot write assessment: " + path);
    os << "# "
       << make_stamp({{"config_hash", std::to_string(cfg.config_hash())},
                      {"train_hash", std::to_string(cfg.train_hash())},
                      {"kind", reg::to_string(cfg.kind)},
                      {"subset", subset}})
       << "\n";
    os << "patient_id,timepoint,parameter,H,ground_truth\n";
    for (const auto& study : manifest.studies) {
        pipeline::StudyAssessment a = pipeline::assess_study(models, study, table, trim, clamp17);
        for (int k = 0; k < data::kNumParams; ++k) {
            os << study.patient_id << ',' << data::to_string(study.timepoint) << ','
               << data::to_string(static_cast<data::Param>(k)) << ','
               << csv::format_double(a.h[static_cast<std::size_t>(k)]) << ','
               << csv::format_double(study.labels[static_cast<data::Param>(k)]) << "\n";
        }
    }
    std::cout << "assess: " << manifest.study_count() << " studies (" << subset << ") -> " << path
              << "\n";
    return 0;
}

int cmd_report(const RunConfig& cfg) {
    const std::string assess_path = (fs::path(cfg.report_dir) / "assessment.csv").string();
    csv::Table t = csv::read_file(assess_path);
    auto stamps = parse_stamps(t.comments);
    require_stamp(stamps, "config_hash", cfg.config_hash(), assess_path);
    const std::vector<std::string> expected_header = {"patient_id", "timepoint", "parameter", "H",
                                                      "ground_truth"};
    if (t.header != expected_header) throw DataError("unexpected assessment header");

    std::array<std::vector<pipeline::StudyOutcome>, data::kNumParams> outcomes;
    for (const auto& row : t.rows) {
        const data::Param param = data::param_from_string(row[2]);
        pipeline::StudyOutcome o;
        o.patient_id = row[0];
        o.study_id = row[0] + "/" + row[1];
        o.predicted_h = csv::parse_double(row[3], assess_path);
        o.ground_truth = csv::parse_double(row[4], assess_path);
        outcomes[static_cast<std::size_t>(static_cast<int>(param))].push_back(std::move(o));
    }
    pipeline::CvCell cell;
    cell.alpha = cfg.lasso.alpha;
    cell.kind = cfg.kind;
    for (int k = 0; k < data::kNumParams; ++k) {
        if (outcomes[static_cast<std::size_t>(k)].empty())
            throw DataError("assessment has no rows for parameter " +
                            data::to_string(static_cast<data::Param>(k)));
        cell.per_param[static_cast<std::size_t>(k)] =
            pipeline::evaluate(outcomes[static_cast<std::size_t>(k)]);
    }
    std::vector<pipeline::CvCell> cells = {cell};

    const std::string txt_path = (fs::path(cfg.report_dir) / "report.txt").string();
    const std::string csv_path = (fs::path(cfg.report_dir) / "report.csv").string();
    std::ofstream txt(txt_path);
    txt << "# " << make_stamp({{"config_hash", std::to_string(cfg.config_hash())}}) << "\n"
        << pipeline::render_report_text(cells);
    std::ofstream csvf(csv_path);
    csvf << "# " << make_stamp({{"config_hash", std::to_string(cfg.config_hash())}}) << "\n"
         << pipeline::render_report_csv(cells);
    std::cout << pipeline::render_report_text(cells);
    std::cout << "report: " << txt_path << "\n";
    return 0;
}

} // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"Tendon-healing assessment pipeline: hand-crafted + deep feature fusion"};
    app.require_subcommand(1);

    std::string config_path = "tfus.json";
    int threads = 1;
    bool clamp17 = false;
    int trim_count = -1;
    std::string subset = "all";

    app.add_option("--config", config_path, "JSON run configuration")->capture_default_str();
    app.add_option("--threads", threads, "worker threads for extract/cv")->capture_default_str();
    app.add_flag("--clamp-17", clamp17, "clamp predictions to [1,7] during assess");
    app.add_option("--trim-count", trim_count,
                   "count-based H trimming: drop K slices per tail instead of the fraction");

    app.add_subcommand("synth", "generate a synthetic cohort");
    app.add_subcommand("extract", "compute hand-crafted features into the cache");
    app.add_subcommand("pca", "fit/load the deep reduction and build the 200-dim cache");
    app.add_subcommand("train", "train the six parameter models");
    app.add_subcommand("cv", "grid cross-validation on the training split");
    auto* assess_cmd = app.add_subcommand("assess", "apply bundles to a manifest, emit H scores");
    assess_cmd->add_option("--subset", subset, "train, test or all")->capture_default_str();
    app.add_subcommand("report", "metrics tables from the latest assessment");

    std::vector<std::string> argv_rev(args.rbegin(), args.rend());
    try {
        app.parse(argv_rev);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) { // --help
            std::cout << app.help();
            return 0;
        }
        std::cerr << "error: config: " << e.what() << "\n";
        return 2;
    }

    try {
        RunConfig cfg = RunConfig::from_file(config_path);
        if (app.got_subcommand("synth")) return cmd_synth(cfg);
        if (app.got_subcommand("extract")) return cmd_extract(cfg, threads);
        if (app.got_subcommand("pca")) return cmd_pca(cfg);
        if (app.got_subcommand("train")) return cmd_train(cfg);
        if (app.got_subcommand("cv")) return cmd_cv(cfg, threads);
        if (app.got_subcommand("assess")) return cmd_assess(cfg, subset, clamp17, trim_count);
        if (app.got_subcommand("report")) return cmd_report(cfg);
        std::cerr << "error: config: no subcommand\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "error: config: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        std::cerr << "error: data: " << e.what() << "\n";
        return 3;
    } catch (const NumericalError& e) {
        std::cerr << "error: numerical: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << "\n";
        return 4;
    }
}

} // namespace tfus::cli
