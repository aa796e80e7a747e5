#pragma once

#include <string>

#include <Eigen/Dense>

namespace tfus::pca {

struct PcaModel {
    Eigen::VectorXd mean;                      // in_dim
    Eigen::MatrixXd components;                // out_dim x in_dim, rows orthonormal
    Eigen::VectorXd explained_variance_ratio;  // out_dim, nonincreasing, in [0,1]
    bool rank_deficient = false; // trailing components are an orthonormal completion

    int in_dim() const { return static_cast<int>(mean.size()); }
    int out_dim() const { return static_cast<int>(components.rows()); }
};

// Principal components of the column-centered data (top right-singular
// vectors), via the Gram matrix when n <= d and the covariance otherwise.
// Ratios are squared singular values over the total. Sign convention: the
// entry of largest magnitude in each component is nonnegative.
PcaModel fit_pca(const Eigen::MatrixXd& data, int n_components);

Eigen::VectorXd transform(const PcaModel& model, const Eigen::VectorXd& activations);
Eigen::MatrixXd transform_all(const PcaModel& model, const Eigen::MatrixXd& data); // row-wise
Eigen::VectorXd inverse_transform(const PcaModel& model, const Eigen::VectorXd& reduced);

// Flat binary: magic "PCAM", u32 in/out dims, then mean, components
// (row-major), ratios as little-endian f64.
void save(const PcaModel& model, const std::string& path);
PcaModel load(const std::string& path);

} // namespace tfus::pca
