#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tfus/errors.hpp"

namespace tfus::lasso {

struct LassoConfig {
    double alpha = 0.1;
    double tol = 1e-6;       // max |coefficient change| per sweep
    int max_sweeps = 10000;
    bool standardize = true; // zero mean / unit variance columns before the penalty
    bool record_objective = false;

    void validate() const;
    std::uint64_t hash() const;
};

struct LassoModel {
    double intercept = 0.0;           // original units
    Eigen::VectorXd coefficients;     // standardized space
    Eigen::VectorXd feature_mean;
    Eigen::VectorXd feature_scale;    // 1 where the column was constant or unscaled
    std::vector<int> support;         // sorted indices of nonzero coefficients
    int sweeps = 0;
    std::vector<double> objective_trace; // one value per sweep when recorded

    // coefficients mapped back to original feature units.
    Eigen::VectorXd original_coefficients() const;
    double predict(const Eigen::VectorXd& x) const;
};

// Minimizes (1/(2n)) * ||y - X b - b0||^2 + alpha * ||b||_1 by cyclic
// coordinate descent with soft thresholding. Constant columns get
// coefficient zero. Throws LassoNonConvergence past max_sweeps.
LassoModel fit_lasso(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                     const LassoConfig& config);

class LassoNonConvergence : public NumericalError {
public:
    LassoNonConvergence(const std::string& msg, LassoModel last, double delta)
        : NumericalError(msg), last_model(std::move(last)), last_delta(delta) {}
    LassoModel last_model;
    double last_delta;
};

// Partition of a 246-dim fused-vector support into deep (0..199) and
// hand-crafted (200..245) blocks, with readable names for the latter.
struct SelectionReport {
    std::vector<int> all;                      // sorted support
    std::vector<int> deep;                     // fused indices < 200
    std::vector<int> handcrafted;              // fused indices >= 200
    std::vector<std::string> handcrafted_names;

    std::string summary() const; // "k DL features and m hand-crafted features"
};

SelectionReport selected_features(const LassoModel& model);

} // namespace tfus::lasso
