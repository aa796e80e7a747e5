#include "tfus/pca.hpp"

#include <cmath>
#include <fstream>

#include "tfus/binio.hpp"
#include "tfus/errors.hpp"

namespace tfus::pca {

namespace {

// Fills rows [rank, k) with unit vectors orthogonal to all earlier rows,
// seeded from canonical basis vectors.
void orthonormal_completion(Eigen::MatrixXd& components, int rank) {
    const int k = static_cast<int>(components.rows());
    const int d = static_cast<int>(components.cols());
    int filled = rank;
    for (int e = 0; e < d && filled < k; ++e) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
        v(e) = 1.0;
        for (int r = 0; r < filled; ++r) v -= components.row(r).dot(v) * components.row(r).transpose();
        const double norm = v.norm();
        if (norm > 1e-6) {
            components.row(filled) = v.transpose() / norm;
            ++filled;
        }
    }
    if (filled < k)
        throw NumericalError("failed to complete an orthonormal basis for rank-deficient PCA");
}

void fix_signs(Eigen::MatrixXd& components) {
    for (int r = 0; r < components.rows(); ++r) {
        int idx = 0;
        components.row(r).cwiseAbs().maxCoeff(&idx);
        if (components(r, idx) < 0.0) components.row(r) = -components.row(r);
    }
}

} // namespace

PcaModel fit_pca(const Eigen::MatrixXd& data, int n_components) {
    const long n = data.rows();
    const long d = data.cols();
    if (n_components < 1) throw ConfigError("n_components must be positive");
    if (n_components > d)
        throw ConfigError("n_components " + std::to_string(n_components) +
                          " exceeds feature dimension " + std::to_string(d));
    if (n < n_components)
        throw ConfigError("need at least n_components rows to fit PCA (" + std::to_string(n) +
                          " < " + std::to_string(n_components) + ")");

    PcaModel model;
    model.mean = data.colwise().mean();
    Eigen::MatrixXd centered = data.rowwise() - model.mean.transpose();

    // Both routes produce the eigenpairs of centered' * centered; the Gram
    // route avoids forming a d x d matrix when rows are scarce.
    Eigen::VectorXd evals;   // descending, eigenvalues of X'X (squared singular values)
    Eigen::MatrixXd basis;   // d x k right-singular vectors
    double total = 0.0;

    if (n <= d) {
        Eigen::MatrixXd gram = centered * centered.transpose(); // n x n
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
        if (eig.info() != Eigen::Success) throw NumericalError("Gram eigendecomposition failed");
        const Eigen::VectorXd& lam = eig.eigenvalues(); // ascending
        total = std::max(lam.sum(), 0.0);
        evals.resize(n_components);
        basis.resize(d, n_components);
        const double rank_tol = std::max(lam(n - 1), 0.0) * 1e-10;
        int rank = 0;
        for (int i = 0; i < n_components; ++i) {
            const double l = std::max(lam(n - 1 - i), 0.0);
            evals(i) = l;
            if (l > rank_tol && l > 0.0) {
                Eigen::VectorXd v = centered.transpose() * eig.eigenvectors().col(n - 1 - i);
                basis.col(i) = v / std::sqrt(l);
                ++rank;
            } else {
                evals(i) = std::max(l, 0.0);
                basis.col(i).setZero();
            }
        }
        model.components = basis.transpose();
        if (rank < n_components) {
            model.rank_deficient = true;
            orthonormal_completion(model.components, rank);
            for (int i = rank; i < n_components; ++i) evals(i) = 0.0;
        }
    } else {
        Eigen::MatrixXd cov = centered.transpose() * centered; // d x d, unnormalized
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
        if (eig.info() != Eigen::Success)
            throw NumericalError("covariance eigendecomposition failed");
        const Eigen::VectorXd& lam = eig.eigenvalues();
        total = std::max(lam.sum(), 0.0);
        evals.resize(n_components);
        model.components.resize(n_components, d);
        const double rank_tol = std::max(lam(d - 1), 0.0) * 1e-10;
        int rank = 0;
        for (int i = 0; i < n_components; ++i) {
            const double l = std::max(lam(d - 1 - i), 0.0);
            evals(i) = l;
            model.components.row(i) = eig.eigenvectors().col(d - 1 - i).transpose();
            if (l > rank_tol && l > 0.0) ++rank;
        }
        if (rank < n_components) {
            model.rank_deficient = true;
            for (int i = rank; i < n_components; ++i) evals(i) = 0.0;
        }
    }

    fix_signs(model.components);
    model.explained_variance_ratio.resize(n_components);
    for (int i = 0; i < n_components; ++i)
        model.explained_variance_ratio(i) = total > 0.0 ? evals(i) / total : 0.0;
    return model;
}

Eigen::VectorXd transform(const PcaModel& model, const Eigen::VectorXd& activations) {
    if (activations.size() != model.mean.size())
        throw DataError("activation length " + std::to_string(activations.size()) +
                        " does not match PCA input dimension " + std::to_string(model.in_dim()));
    return model.components * (activations - model.mean);
}

Eigen::MatrixXd transform_all(const PcaModel& model, const Eigen::MatrixXd& data) {
    if (data.cols() != model.mean.size())
        throw DataError("data width does not match PCA input dimension");
    return (data.rowwise() - model.mean.transpose()) * model.components.transpose();
}

Eigen::VectorXd inverse_transform(const PcaModel& model, const Eigen::VectorXd& reduced) {
    if (reduced.size() != model.components.rows())
        throw DataError("reduced length does not match PCA output dimension");
    return model.components.transpose() * reduced + model.mean;
}

void save(const PcaModel& model, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw DataError("cannot write PCA model: " + path);
    write_magic(os, "PCAM");
    write_u32le(os, static_cast<std::uint32_t>(model.in_dim()));
    write_u32le(os, static_cast<std::uint32_t>(model.out_dim()));
    for (int i = 0; i < model.in_dim(); ++i) write_f64le(os, model.mean(i));
    for (int r = 0; r < model.out_dim(); ++r)
        for (int c = 0; c < model.in_dim(); ++c) write_f64le(os, model.components(r, c));
    for (int i = 0; i < model.out_dim(); ++i) write_f64le(os, model.explained_variance_ratio(i));
    if (!os) throw DataError("short write on PCA model: " + path);
}

PcaModel load(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DataError("cannot open PCA model: " + path);
    expect_magic(is, "PCAM", "PCA model");
    const std::uint32_t in_dim = read_u32le(is);
    const std::uint32_t out_dim = read_u32le(is);
    if (in_dim == 0 || out_dim == 0 || out_dim > in_dim)
        throw DataError("invalid PCA model dimensions in " + path);
    PcaModel model;
    model.mean.resize(in_dim);
    for (std::uint32_t i = 0; i < in_dim; ++i) model.mean(i) = read_f64le(is);
    model.components.resize(out_dim, in_dim);
    for (std::uint32_t r = 0; r < out_dim; ++r)
        for (std::uint32_t c = 0; c < in_dim; ++c) model.components(r, c) = read_f64le(is);
    model.explained_variance_ratio.resize(out_dim);
    for (std::uint32_t i = 0; i < out_dim; ++i) {
        model.explained_variance_ratio(i) = read_f64le(is);
        if (model.explained_variance_ratio(i) == 0.0) model.rank_deficient = true;
    }
    return model;
}

} // namespace tfus::pca
