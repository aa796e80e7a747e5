#include "tfus/run_config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "tfus/binio.hpp"
#include "tfus/csv.hpp"
#include "tfus/errors.hpp"

using nlohmann::json;

namespace tfus::cli {

namespace {

template <typename T>
void maybe(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

} // namespace

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return from_json_text(ss.str(), path);
}

RunConfig RunConfig::from_json_text(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError("config parse failure in " + origin + ": " + e.what());
    }
    RunConfig cfg;
    try {
        if (j.contains("paths")) {
            const json& p = j.at("paths");
            maybe(p, "manifest", cfg.manifest_path);
            maybe(p, "feature_cache", cfg.feature_cache_dir);
            maybe(p, "model_dir", cfg.model_dir);
            maybe(p, "report_dir", cfg.report_dir);
        }
        if (j.contains("glcm")) {
            const json& g = j.at("glcm");
            maybe(g, "levels", cfg.glcm_levels);
            maybe(g, "distances", cfg.glcm_distances);
        }
        if (j.contains("lasso")) {
            const json& l = j.at("lasso");
            maybe(l, "alpha", cfg.lasso.alpha);
            maybe(l, "tol", cfg.lasso.tol);
            maybe(l, "max_sweeps", cfg.lasso.max_sweeps);
            maybe(l, "standardize", cfg.lasso.standardize);
            if (l.contains("per_param_alpha"))
                cfg.per_param_alpha =
                    l.at("per_param_alpha").get<std::map<std::string, double>>();
        }
        if (j.contains("regressor")) {
            const json& r = j.at("regressor");
            if (r.contains("kind")) cfg.kind = reg::kind_from_string(r.at("kind").get<std::string>());
            if (r.contains("svr")) {
                const json& s = r.at("svr");
                maybe(s, "C", cfg.fit.svr.C);
                maybe(s, "epsilon", cfg.fit.svr.epsilon);
                maybe(s, "gamma", cfg.fit.svr.gamma);
                maybe(s, "tol", cfg.fit.svr.tol);
                maybe(s, "max_iter", cfg.fit.svr.max_iter);
            }
            if (r.contains("mlp")) {
                const json& m = r.at("mlp");
                maybe(m, "learning_rate", cfg.fit.mlp.learning_rate);
                maybe(m, "momentum", cfg.fit.mlp.momentum);
                maybe(m, "epochs", cfg.fit.mlp.epochs);
            }
        }
        if (j.contains("trim")) maybe(j.at("trim"), "fraction", cfg.trim_fraction);
        if (j.contains("seeds")) {
            const json& s = j.at("seeds");
            maybe(s, "pipeline", cfg.seed_pipeline);
            maybe(s, "folds", cfg.seed_folds);
        }
        maybe(j, "holdout_patients", cfg.holdout_patients);
        if (j.contains("cv")) {
            const json& c = j.at("cv");
            maybe(c, "k", cfg.cv_k);
            maybe(c, "alphas", cfg.cv_alphas);
            if (c.contains("kinds")) {
                cfg.cv_kinds.clear();
                for (const auto& k : c.at("kinds"))
                    cfg.cv_kinds.push_back(reg::kind_from_string(k.get<std::string>()));
            }
        }
        if (j.contains("pca")) {
            const json& p = j.at("pca");
            maybe(p, "components", cfg.pca_components);
            maybe(p, "fit_sample", cfg.pca_fit_sample);
            maybe(p, "model_path", cfg.pca_model_path);
        }
        if (j.contains("synth")) {
            const json& s = j.at("synth");
            maybe(s, "n_patients", cfg.synth.n_patients);
            maybe(s, "studies_per_patient", cfg.synth.studies_per_patient);
            maybe(s, "slices_min", cfg.synth.slices_min);
            maybe(s, "slices_max", cfg.synth.slices_max);
            maybe(s, "width", cfg.synth.width);
            maybe(s, "height", cfg.synth.height);
            maybe(s, "noise_sigma", cfg.synth.noise_sigma);
            maybe(s, "deep_dim", cfg.synth.deep_dim);
            maybe(s, "seed", cfg.synth.seed);
            maybe(s, "out_dir", cfg.synth_out_dir);
        }
    } catch (const json::exception& e) {
        throw ConfigError("config field error in " + origin + ": " + e.what());
    }
    if (cfg.glcm_distances.size() != 3)
        throw ConfigError("glcm.distances must list exactly three distances");
    if (!(cfg.trim_fraction >= 0.0 && cfg.trim_fraction < 0.5))
        throw ConfigError("trim.fraction must be in [0, 0.5)");
    if (cfg.pca_components < 1) throw ConfigError("pca.components must be positive");
    cfg.lasso.validate();
    return cfg;
}

std::string RunConfig::canonical() const {
    json j;
    j["paths"] = {{"manifest", manifest_path},
                  {"feature_cache", feature_cache_dir},
                  {"model_dir", model_dir},
                  {"report_dir", report_dir}};
    j["glcm"] = {{"levels", glcm_levels}, {"distances", glcm_distances}};
    j["lasso"] = {{"alpha", lasso.alpha},
                  {"tol", lasso.tol},
                  {"max_sweeps", lasso.max_sweeps},
                  {"standardize", lasso.standardize},
                  {"per_param_alpha", per_param_alpha}};
    j["regressor"] = {{"kind", reg::to_string(kind)},
                      {"svr",
                       {{"C", fit.svr.C},
                        {"epsilon", fit.svr.epsilon},
                        {"gamma", fit.svr.gamma},
                        {"tol", fit.svr.tol},
                        {"max_iter", fit.svr.max_iter}}},
                      {"mlp",
                       {{"learning_rate", fit.mlp.learning_rate},
                        {"momentum", fit.mlp.momentum},
                        {"epochs", fit.mlp.epochs}}}};
    j["trim"] = {{"fraction", trim_fraction}};
    j["seeds"] = {{"pipeline", seed_pipeline}, {"folds", seed_folds}};
    j["holdout_patients"] = holdout_patients;
    std::vector<std::string> kind_names;
    for (reg::Kind k : cv_kinds) kind_names.push_back(reg::to_string(k));
    j["cv"] = {{"k", cv_k}, {"alphas", cv_alphas}, {"kinds", kind_names}};
    j["pca"] = {{"components", pca_components},
                {"fit_sample", pca_fit_sample},
                {"model_path", pca_model_path}};
    j["synth"] = {{"n_patients", synth.n_patients},
                  {"studies_per_patient", synth.studies_per_patient},
                  {"slices_min", synth.slices_min},
                  {"slices_max", synth.slices_max},
                  {"width", synth.width},
                  {"height", synth.height},
                  {"noise_sigma", synth.noise_sigma},
                  {"deep_dim", synth.deep_dim},
                  {"seed", synth.seed},
                  {"out_dir", synth_out_dir}};
    return j.dump();
}

std::uint64_t RunConfig::config_hash() const { return fnv1a64(canonical()); }

std::uint64_t RunConfig::glcm_hash() const {
    std::string repr = "levels=" + std::to_string(glcm_levels) + ";d=";
    for (int d : glcm_distances) repr += std::to_string(d) + ",";
    return fnv1a64(repr);
}

std::uint64_t RunConfig::pca_hash() const {
    std::string repr = "components=" + std::to_string(pca_components) +
                       ";fit_sample=" + std::to_string(pca_fit_sample) +
                       ";model_path=" + pca_model_path + ";manifest=" + manifest_path +
                       ";seed=" + std::to_string(seed_pipeline);
    return fnv1a64(repr);
}

std::uint64_t RunConfig::train_hash() const {
    std::string repr = "glcm=" + std::to_string(glcm_hash()) +
                       ";pca=" + std::to_string(pca_hash()) +
                       ";alpha=" + csv::format_double(lasso.alpha);
    for (const auto& [k, v] : per_param_alpha) repr += ";" + k + "=" + csv::format_double(v);
    repr += ";kind=" + reg::to_string(kind) + ";fit=" + std::to_string(fit.hash()) +
            ";trim=" + csv::format_double(trim_fraction) +
            ";seed=" + std::to_string(seed_pipeline) + ";holdout=";
    for (const auto& h : holdout_patients) repr += h + ",";
    return fnv1a64(repr);
}

std::vector<features::GlcmConfig> RunConfig::glcm_configs() const {
    std::vector<features::GlcmConfig> out;
    for (int d : glcm_distances) out.emplace_back(d, glcm_levels);
    return out;
}

double RunConfig::alpha_for(data::Param p) const {
    auto it = per_param_alpha.find(data::to_string(p));
    return it == per_param_alpha.end() ? lasso.alpha : it->second;
}

} // namespace tfus::cli
