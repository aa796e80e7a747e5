#include "tfus/lasso.hpp"

#include <cassert>
#include <cmath>

#include "tfus/binio.hpp"
#include "tfus/csv.hpp"
#include "tfus/features.hpp"

namespace tfus::lasso {

namespace {

double soft_threshold(double z, double t) {
    if (z > t) return z - t;
    if (z < -t) return z + t;
    return 0.0;
}

} // namespace

void LassoConfig::validate() const {
    if (alpha < 0.0) throw ConfigError("lasso alpha must be nonnegative");
    if (tol <= 0.0) throw ConfigError("lasso tol must be positive");
    if (max_sweeps < 1) throw ConfigError("lasso max_sweeps must be positive");
}

std::uint64_t LassoConfig::hash() const {
    std::string repr = "alpha=" + csv::format_double(alpha) + ";tol=" + csv::format_double(tol) +
                       ";max_sweeps=" + std::to_string(max_sweeps) +
                       ";standardize=" + (standardize ? "1" : "0");
    return fnv1a64(repr);
}

Eigen::VectorXd LassoModel::original_coefficients() const {
    Eigen::VectorXd out(coefficients.size());
    for (int j = 0; j < coefficients.size(); ++j) out(j) = coefficients(j) / feature_scale(j);
    return out;
}

double LassoModel::predict(const Eigen::VectorXd& x) const {
    if (x.size() != coefficients.size())
        throw DataError("lasso predict: dimension mismatch");
    double acc = intercept;
    for (int j = 0; j < x.size(); ++j)
        acc += coefficients(j) * (x(j) - feature_mean(j)) / feature_scale(j);
    return acc;
}

LassoModel fit_lasso(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                     const LassoConfig& config) {
    config.validate();
    const long n = X.rows();
    const long p = X.cols();
    if (n < 2) throw DataError("lasso needs at least 2 rows");
    if (y.size() != n) throw DataError("lasso: y length does not match X rows");
    if (!y.allFinite() || !X.allFinite()) throw DataError("lasso: non-finite input");

    LassoModel model;
    model.feature_mean = X.colwise().mean();
    model.feature_scale = Eigen::VectorXd::Ones(p);

    // Centered (and optionally scaled) design; y centered so the intercept is
    // unpenalized.
    Eigen::MatrixXd Z = X.rowwise() - model.feature_mean.transpose();
    std::vector<bool> constant_col(static_cast<std::size_t>(p), false);
    if (config.standardize) {
        for (long j = 0; j < p; ++j) {
            const double var = Z.col(j).squaredNorm() / static_cast<double>(n);
            const double sd = std::sqrt(var);
            if (sd > 0.0) {
                Z.col(j) /= sd;
                model.feature_scale(j) = sd;
            } else {
                constant_col[static_cast<std::size_t>(j)] = true;
            }
        }
    } else {
        for (long j = 0; j < p; ++j)
            if (Z.col(j).squaredNorm() == 0.0) constant_col[static_cast<std::size_t>(j)] = true;
    }
    const double y_mean = y.mean();
    Eigen::VectorXd r = y.array() - y_mean; // residual, maintained across updates

    // Per-column curvature (1/n) z_j' z_j; exactly 1 for standardized columns.
    Eigen::VectorXd curv(p);
    for (long j = 0; j < p; ++j) curv(j) = Z.col(j).squaredNorm() / static_cast<double>(n);

    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
    const double inv_n = 1.0 / static_cast<double>(n);

    auto objective = [&]() {
        return 0.5 * inv_n * r.squaredNorm() + config.alpha * beta.lpNorm<1>();
    };

#ifndef NDEBUG
    const bool track_objective = true;
#else
    const bool track_objective = config.record_objective;
#endif

    double max_delta = 0.0;
    bool converged = false;
    double prev_obj = track_objective ? objective() : 0.0;
    for (int sweep = 0; sweep < config.max_sweeps; ++sweep) {
        max_delta = 0.0;
        for (long j = 0; j < p; ++j) {
            if (constant_col[static_cast<std::size_t>(j)]) continue;
            const double old = beta(j);
            const double rho = inv_n * Z.col(j).dot(r) + curv(j) * old;
            const double next = soft_threshold(rho, config.alpha) / curv(j);
            if (next != old) {
                r -= Z.col(j) * (next - old);
                beta(j) = next;
                max_delta = std::max(max_delta, std::abs(next - old));
            }
        }
        model.sweeps = sweep + 1;
        if (track_objective) {
            const double obj = objective();
            // Exact per-coordinate minimization; slack covers roundoff only.
            assert(obj <= prev_obj + 1e-12 * std::max(1.0, std::abs(prev_obj)));
            if (config.record_objective) model.objective_trace.push_back(obj);
            prev_obj = obj;
        }
        if (max_delta < config.tol) {
            converged = true;
            break;
        }
    }

    model.coefficients = beta;
    model.intercept = y_mean; // predict() subtracts feature means explicitly
    for (long j = 0; j < p; ++j)
        if (beta(j) != 0.0) model.support.push_back(static_cast<int>(j));

    if (!converged) {
        throw LassoNonConvergence(
            "lasso did not converge after " + std::to_string(config.max_sweeps) +
                " sweeps (last max coefficient change " + csv::format_double(max_delta) +
                ", tol " + csv::format_double(config.tol) + ")",
            model, max_delta);
    }
    return model;
}

SelectionReport selected_features(const LassoModel& model) {
    if (model.coefficients.size() != data::kDeepReducedDim + features::kHandcraftedCount)
        throw ConfigError("selected_features expects a 246-dim fused-vector model");
    SelectionReport rep;
    rep.all = model.support;
    const auto& names = features::handcrafted_names();
    for (int idx : model.support) {
        if (idx < data::kDeepReducedDim) {
            rep.deep.push_back(idx);
        } else {
            rep.handcrafted.push_back(idx);
            rep.handcrafted_names.push_back(names[static_cast<std::size_t>(
                idx - data::kDeepReducedDim)]);
        }
    }
    return rep;
}

std::string SelectionReport::summary() const {
    return std::to_string(deep.size()) + " DL features and " + std::to_string(handcrafted.size()) +
           " hand-crafted features";
}

} // namespace tfus::lasso
