#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace tfus::reg {

enum class Kind { LR, Poly2, SVR, MLP4 };

const std::string& to_string(Kind k);
Kind kind_from_string(const std::string& s);

struct SvrParams {
    double C = 1.0;
    double epsilon = 0.1;
    double gamma = 0.0;     // <= 0 means 1/dim
    double tol = 1e-3;      // KKT gap tolerance
    long max_iter = 2000000;
    std::size_t cache_bytes = 256u << 20;
};

struct MlpParams {
    double learning_rate = 0.02;
    double momentum = 0.9;
    int epochs = 4000;
    bool record_loss = false;
};

struct FitParams {
    SvrParams svr;
    MlpParams mlp;

    std::uint64_t hash() const;
};

// Column-wise zero-mean / unit-variance mapping fixed at fit time.
struct Standardizer {
    Eigen::VectorXd mean;
    Eigen::VectorXd scale; // 1 for constant columns

    Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
    Eigen::MatrixXd apply_all(const Eigen::MatrixXd& X) const;
    static Standardizer fit(const Eigen::MatrixXd& X);
};

struct LinearModel {
    Standardizer input;
    Eigen::VectorXd weights;
    double bias = 0.0;
};

struct Poly2Model {
    Standardizer input;
    Eigen::VectorXd weights; // over [x_i, x_i^2, x_i x_j (i<j)]
    double bias = 0.0;
    int input_dim = 0;
};

struct SvrModel {
    Standardizer input;
    Eigen::MatrixXd support_vectors; // standardized rows
    Eigen::VectorXd duals;           // nonzero beta_i, in [-C, C]
    double bias = 0.0;
    double gamma = 0.0;
    double C = 1.0;
    double epsilon = 0.1;
    // Training diagnostics (not serialized): full dual vector, iterations, gap.
    Eigen::VectorXd train_duals;
    long iterations = 0;
    double kkt_gap = 0.0;
};

struct MlpModel {
    Standardizer input;
    Eigen::MatrixXd w1; // hidden x p
    Eigen::VectorXd b1; // hidden
    Eigen::VectorXd w2; // hidden
    double b2 = 0.0;
    std::vector<double> loss_trace; // per epoch when recorded
};

struct TrainedRegressor {
    Kind kind = Kind::LR;
    std::variant<LinearModel, Poly2Model, SvrModel, MlpModel> model;

    int input_dim() const;
    double predict(const Eigen::VectorXd& x) const;
    Eigen::VectorXd predict_all(const Eigen::MatrixXd& X) const;
};

// LR: rank-revealing least squares. Poly2: full quadratic expansion with
// ridge jitter 1e-8. SVR: RBF-kernel epsilon-SVR solved by SMO to the KKT
// gap tolerance. MLP4: 4 tanh hidden units trained full-batch with momentum
// from a seeded init. p is soft-limited to 64 columns.
TrainedRegressor fit(Kind kind, const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                     std::uint64_t seed, const FitParams& params = {});

// Poly2 basis in the documented term order: [x_0..x_{p-1}, x_0^2..x_{p-1}^2,
// x_i x_j for i<j].
Eigen::VectorXd poly2_expand(const Eigen::VectorXd& x);

// Mean squared / 2 loss and analytic parameter gradients for MLP training
// and the finite-difference harness. Parameter order: w1 row-major, b1, w2, b2.
double mlp_loss(const MlpModel& m, const Eigen::MatrixXd& Xs, const Eigen::VectorXd& y);
Eigen::VectorXd mlp_gradient(const MlpModel& m, const Eigen::MatrixXd& Xs,
                             const Eigen::VectorXd& y);

// Max over parameters of |analytic - central difference| / max(1, |a|, |n|),
// with step h = 1e-5. X is in original units; the model's standardizer applies.
double gradient_check(const MlpModel& model, const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

void save(std::ostream& os, const TrainedRegressor& model);
TrainedRegressor load(std::istream& is);

} // namespace tfus::reg
