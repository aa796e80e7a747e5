#include "tfus/regressors.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <istream>
#include <ostream>
#include <random>

#include "tfus/binio.hpp"
#include "tfus/csv.hpp"
#include "tfus/errors.hpp"

namespace tfus::reg {

namespace {

const std::array<std::string, 4> kKindNames = {"LR", "Poly2", "SVR", "MLP4"};

constexpr int kMaxInputDim = 64; // soft limit; selected sets are expected well below
constexpr int kHiddenUnits = 4;

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace

const std::string& to_string(Kind k) { return kKindNames[static_cast<int>(k)]; }

Kind kind_from_string(const std::string& s) {
    for (std::size_t i = 0; i < kKindNames.size(); ++i)
        if (kKindNames[i] == s) return static_cast<Kind>(i);
    throw ConfigError("unknown regressor kind '" + s + "'");
}

std::uint64_t FitParams::hash() const {
    std::string repr = "svr:C=" + csv::format_double(svr.C) +
                       ";eps=" + csv::format_double(svr.epsilon) +
                       ";gamma=" + csv::format_double(svr.gamma) +
                       ";tol=" + csv::format_double(svr.tol) +
                       ";mlp:lr=" + csv::format_double(mlp.learning_rate) +
                       ";mom=" + csv::format_double(mlp.momentum) +
                       ";epochs=" + std::to_string(mlp.epochs);
    return fnv1a64(repr);
}

Standardizer Standardizer::fit(const Eigen::MatrixXd& X) {
    Standardizer s;
    s.mean = X.colwise().mean();
    s.scale = Eigen::VectorXd::Ones(X.cols());
    for (long j = 0; j < X.cols(); ++j) {
        const double var =
            (X.col(j).array() - s.mean(j)).square().sum() / static_cast<double>(X.rows());
        const double sd = std::sqrt(var);
        if (sd > 0.0) s.scale(j) = sd;
    }
    return s;
}

Eigen::VectorXd Standardizer::apply(const Eigen::VectorXd& x) const {
    if (x.size() != mean.size()) throw DataError("regressor input dimension mismatch");
    return (x - mean).cwiseQuotient(scale);
}

Eigen::MatrixXd Standardizer::apply_all(const Eigen::MatrixXd& X) const {
    if (X.cols() != mean.size()) throw DataError("regressor input dimension mismatch");
    return (X.rowwise() - mean.transpose()).array().rowwise() / scale.transpose().array();
}

Eigen::VectorXd poly2_expand(const Eigen::VectorXd& x) {
    const long p = x.size();
    Eigen::VectorXd out(2 * p + p * (p - 1) / 2);
    long idx = 0;
    for (long i = 0; i < p; ++i) out(idx++) = x(i);
    for (long i = 0; i < p; ++i) out(idx++) = x(i) * x(i);
    for (long i = 0; i < p; ++i)
        for (long j = i + 1; j < p; ++j) out(idx++) = x(i) * x(j);
    return out;
}

// ---------------------------------------------------------------------------
// Fitting
// ---------------------------------------------------------------------------

namespace {

LinearModel fit_linear(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    const long n = X.rows();
    const long p = X.cols();
    if (n < p + 1)
        throw DataError("LR needs n >= p + 1 rows (" + std::to_string(n) + " < " +
                        std::to_string(p + 1) + ")");
    LinearModel m;
    m.input = Standardizer::fit(X);
    Eigen::MatrixXd design(n, p + 1);
    design.leftCols(p) = m.input.apply_all(X);
    design.col(p).setOnes();
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < p + 1)
        throw NumericalError("LR design matrix is rank deficient (rank " +
                             std::to_string(qr.rank()) + " of " + std::to_string(p + 1) + ")");
    Eigen::VectorXd sol = qr.solve(y);
    m.weights = sol.head(p);
    m.bias = sol(p);
    return m;
}

Poly2Model fit_poly2(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    const long n = X.rows();
    const long p = X.cols();
    if (n < p + 1)
        throw DataError("Poly2 needs n >= p + 1 rows (" + std::to_string(n) + " < " +
                        std::to_string(p + 1) + ")");
    Poly2Model m;
    m.input = Standardizer::fit(X);
    m.input_dim = static_cast<int>(p);
    Eigen::MatrixXd Xs = m.input.apply_all(X);
    const long terms = 2 * p + p * (p - 1) / 2;
    Eigen::MatrixXd phi(n, terms);
    for (long i = 0; i < n; ++i) phi.row(i) = poly2_expand(Xs.row(i).transpose()).transpose();

    // Ridge jitter on the centered normal equations; the intercept stays
    // unpenalized via centering.
    Eigen::RowVectorXd phi_mean = phi.colwise().mean();
    Eigen::MatrixXd phic = phi.rowwise() - phi_mean;
    const double y_mean = y.mean();
    Eigen::VectorXd yc = y.array() - y_mean;
    Eigen::MatrixXd gram = phic.transpose() * phic;
    gram.diagonal().array() += 1e-8;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
    if (ldlt.info() != Eigen::Success)
        throw NumericalError("Poly2 normal equations failed to factor");
    m.weights = ldlt.solve(phic.transpose() * yc);
    if (!m.weights.allFinite()) throw NumericalError("Poly2 produced non-finite coefficients");
    m.bias = y_mean - phi_mean.dot(m.weights);
    return m;
}

// Kernel column cache for the SMO solver; double rows, FIFO eviction.
class KernelCache {
public:
    KernelCache(const Eigen::MatrixXd& Xs, double gamma, std::size_t budget_bytes)
        : Xs_(Xs), gamma_(gamma), rows_(static_cast<std::size_t>(Xs.rows())) {
        const std::size_t row_bytes = sizeof(double) * static_cast<std::size_t>(Xs.rows());
        max_rows_ = std::max<std::size_t>(2, budget_bytes / std::max<std::size_t>(1, row_bytes));
    }

    const Eigen::VectorXd& column(long i, long pinned_a, long pinned_b) {
        auto& slot = rows_[static_cast<std::size_t>(i)];
        if (slot.size() == 0) {
            if (resident_.size() >= max_rows_) evict_one(pinned_a, pinned_b);
            slot = compute(i);
            resident_.push_back(i);
        }
        return slot;
    }

private:
    Eigen::VectorXd compute(long i) const {
        Eigen::VectorXd col(Xs_.rows());
        for (long r = 0; r < Xs_.rows(); ++r) {
            const double d2 = (Xs_.row(r) - Xs_.row(i)).squaredNorm();
            col(r) = std::exp(-gamma_ * d2);
        }
        return col;
    }

    void evict_one(long pinned_a, long pinned_b) {
        while (!resident_.empty()) {
            long victim = resident_.front();
            resident_.pop_front();
            if (victim == pinned_a || victim == pinned_b) {
                resident_.push_back(victim);
                continue;
            }
            rows_[static_cast<std::size_t>(victim)].resize(0);
            return;
        }
    }

    const Eigen::MatrixXd& Xs_;
    double gamma_;
    std::vector<Eigen::VectorXd> rows_;
    std::deque<long> resident_;
    std::size_t max_rows_;
};

// SMO over the 2n-variable epsilon-SVR dual: variables alpha_i (sign +1) and
// alpha*_i (sign -1) in [0, C], beta = alpha - alpha*, constraint sum(beta)=0.
// Maximal-violating-pair selection; converged when the KKT gap <= tol.
SvrModel fit_svr(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const SvrParams& params) {
    const long n = X.rows();
    const long p = X.cols();
    if (n < 1) throw DataError("SVR needs at least one row");
    if (params.C <= 0.0) throw ConfigError("SVR C must be positive");
    if (params.epsilon < 0.0) throw ConfigError("SVR epsilon must be nonnegative");

    SvrModel m;
    m.input = Standardizer::fit(X);
    m.C = params.C;
    m.epsilon = params.epsilon;
    m.gamma = params.gamma > 0.0 ? params.gamma : 1.0 / static_cast<double>(p);

    Eigen::MatrixXd Xs = m.input.apply_all(X);
    KernelCache cache(Xs, m.gamma, params.cache_bytes);

    const double C = params.C;
    const double eps = params.epsilon;
    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);      // virtual vars, sign +1
    Eigen::VectorXd alpha_star = Eigen::VectorXd::Zero(n); // virtual vars, sign -1
    Eigen::VectorXd g = -y; // (K beta) - y with beta = 0

    // For each sample, v = g + eps belongs to the alpha variable and
    // v = g - eps to the alpha* variable. A feasible multiplier b must satisfy
    // v_k <= b for every "lower" slot and b <= v_k for every "upper" slot.
    long iter = 0;
    double gap = std::numeric_limits<double>::infinity();
    double b_lag = 0.0;
    while (iter < params.max_iter) {
        double lo_best = -std::numeric_limits<double>::infinity();
        double hi_best = std::numeric_limits<double>::infinity();
        long lo_idx = -1, hi_idx = -1;  // virtual indices in [0, 2n)
        for (long i = 0; i < n; ++i) {
            const double va = g(i) + eps;
            const double vs = g(i) - eps;
            // upper constraints: alpha < C, or alpha* > 0
            if (alpha(i) < C && va < hi_best) { hi_best = va; hi_idx = i; }
            if (alpha_star(i) > 0.0 && vs < hi_best) { hi_best = vs; hi_idx = i + n; }
            // lower constraints: alpha > 0, or alpha* < C
            if (alpha(i) > 0.0 && va > lo_best) { lo_best = va; lo_idx = i; }
            if (alpha_star(i) < C && vs > lo_best) { lo_best = vs; lo_idx = i + n; }
        }
        gap = lo_best - hi_best;
        b_lag = 0.5 * (lo_best + hi_best);
        if (!(gap > params.tol)) break;

        const long si = lo_idx % n; // sample of the "lower" violator, beta decreases
        const long sj = hi_idx % n; // sample of the "upper" violator, beta increases
        const bool i_is_alpha = lo_idx < n;
        const bool j_is_alpha = hi_idx < n;

        // Box room along the step: the lower slot sheds mass, the upper gains.
        double t_max = std::numeric_limits<double>::infinity();
        t_max = std::min(t_max, i_is_alpha ? alpha(si) : C - alpha_star(si));
        t_max = std::min(t_max, j_is_alpha ? C - alpha(sj) : alpha_star(sj));

        const Eigen::VectorXd& ki = cache.column(si, si, sj);
        const Eigen::VectorXd& kj = cache.column(sj, si, sj);
        const double eta = ki(si) + kj(sj) - 2.0 * ki(sj);
        double t;
        if (eta > 1e-12) {
            t = std::min(gap / eta, t_max);
        } else {
            t = t_max; // flat or degenerate direction: slide to the box edge
        }
        if (!(t > 0.0))
            throw NumericalError("SVR SMO made no progress (gap " + csv::format_double(gap) + ")");

        if (i_is_alpha) alpha(si) -= t; else alpha_star(si) += t;
        if (j_is_alpha) alpha(sj) += t; else alpha_star(sj) -= t;
        // beta_si -= t, beta_sj += t unless both slots share the sample.
        if (si != sj) g += t * (kj - ki);
        ++iter;
    }
    if (!(gap <= params.tol))
        throw NumericalError("SVR did not converge in " + std::to_string(params.max_iter) +
                             " iterations (KKT gap " + csv::format_double(gap) + ", tol " +
                             csv::format_double(params.tol) + ")");

    m.bias = -b_lag;
    m.iterations = iter;
    m.kkt_gap = gap;
    m.train_duals = alpha - alpha_star;

    std::vector<long> sv;
    for (long i = 0; i < n; ++i)
        if (m.train_duals(i) != 0.0) sv.push_back(i);
    m.support_vectors.resize(static_cast<long>(sv.size()), p);
    m.duals.resize(static_cast<long>(sv.size()));
    for (std::size_t k = 0; k < sv.size(); ++k) {
        m.support_vectors.row(static_cast<long>(k)) = Xs.row(sv[k]);
        m.duals(static_cast<long>(k)) = m.train_duals(sv[k]);
    }
    return m;
}

MlpModel init_mlp(long p, double y_mean, std::uint64_t seed) {
    MlpModel m;
    std::mt19937_64 rng(seed);
    const double r1 = 1.0 / std::sqrt(static_cast<double>(p));
    const double r2 = 1.0 / std::sqrt(static_cast<double>(kHiddenUnits));
    m.w1.resize(kHiddenUnits, p);
    for (int i = 0; i < kHiddenUnits; ++i)
        for (long j = 0; j < p; ++j) m.w1(i, j) = (2.0 * uniform01(rng) - 1.0) * r1;
    m.b1 = Eigen::VectorXd::Zero(kHiddenUnits);
    m.w2.resize(kHiddenUnits);
    for (int i = 0; i < kHiddenUnits; ++i) m.w2(i) = (2.0 * uniform01(rng) - 1.0) * r2;
    m.b2 = y_mean;
    return m;
}

MlpModel fit_mlp(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, std::uint64_t seed,
                 const MlpParams& params) {
    const long n = X.rows();
    const long p = X.cols();
    if (n < 2) throw DataError("MLP4 needs at least 2 rows");
    if (params.learning_rate <= 0.0) throw ConfigError("MLP4 learning rate must be positive");
    if (params.epochs < 1) throw ConfigError("MLP4 epochs must be positive");

    Standardizer std_in = Standardizer::fit(X);
    Eigen::MatrixXd Xs = std_in.apply_all(X);
    MlpModel m = init_mlp(p, y.mean(), seed);
    m.input = std_in;

    const long n_params = kHiddenUnits * p + kHiddenUnits + kHiddenUnits + 1;
    Eigen::VectorXd velocity = Eigen::VectorXd::Zero(n_params);
    for (int epoch = 0; epoch < params.epochs; ++epoch) {
        Eigen::VectorXd grad = mlp_gradient(m, Xs, y);
        velocity = params.momentum * velocity - params.learning_rate * grad;
        long idx = 0;
        for (int i = 0; i < kHiddenUnits; ++i)
            for (long j = 0; j < p; ++j) m.w1(i, j) += velocity(idx++);
        for (int i = 0; i < kHiddenUnits; ++i) m.b1(i) += velocity(idx++);
        for (int i = 0; i < kHiddenUnits; ++i) m.w2(i) += velocity(idx++);
        m.b2 += velocity(idx++);
        if (params.record_loss) m.loss_trace.push_back(mlp_loss(m, Xs, y));
    }
    const double final_loss = mlp_loss(m, Xs, y);
    if (!std::isfinite(final_loss))
        throw NumericalError("MLP4 training diverged (non-finite loss); lower the learning rate");
    return m;
}

} // namespace

double mlp_loss(const MlpModel& m, const Eigen::MatrixXd& Xs, const Eigen::VectorXd& y) {
    Eigen::MatrixXd h = ((Xs * m.w1.transpose()).rowwise() + m.b1.transpose()).array().tanh();
    Eigen::VectorXd pred = (h * m.w2).array() + m.b2;
    return (pred - y).squaredNorm() / (2.0 * static_cast<double>(Xs.rows()));
}

Eigen::VectorXd mlp_gradient(const MlpModel& m, const Eigen::MatrixXd& Xs,
                             const Eigen::VectorXd& y) {
    const long n = Xs.rows();
    const long p = Xs.cols();
    Eigen::MatrixXd h = ((Xs * m.w1.transpose()).rowwise() + m.b1.transpose()).array().tanh();
    Eigen::VectorXd pred = (h * m.w2).array() + m.b2;
    Eigen::VectorXd delta = (pred - y) / static_cast<double>(n);

    Eigen::VectorXd g_w2 = h.transpose() * delta;
    const double g_b2 = delta.sum();
    Eigen::MatrixXd dh =
        (delta * m.w2.transpose()).array() * (1.0 - h.array().square());
    Eigen::MatrixXd g_w1 = dh.transpose() * Xs;
    Eigen::VectorXd g_b1 = dh.colwise().sum();

    Eigen::VectorXd grad(kHiddenUnits * p + kHiddenUnits + kHiddenUnits + 1);
    long idx = 0;
    for (int i = 0; i < kHiddenUnits; ++i)
        for (long j = 0; j < p; ++j) grad(idx++) = g_w1(i, j);
    for (int i = 0; i < kHiddenUnits; ++i) grad(idx++) = g_b1(i);
    for (int i = 0; i < kHiddenUnits; ++i) grad(idx++) = g_w2(i);
    grad(idx++) = g_b2;
    return grad;
}

double gradient_check(const MlpModel& model, const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    const double h = 1e-5;
    Eigen::MatrixXd Xs = model.input.apply_all(X);
    Eigen::VectorXd analytic = mlp_gradient(model, Xs, y);

    MlpModel probe = model;
    const long p = model.w1.cols();
    auto param = [&](long idx) -> double& {
        if (idx < kHiddenUnits * p) return probe.w1(idx / p, idx % p);
        idx -= kHiddenUnits * p;
        if (idx < kHiddenUnits) return probe.b1(idx);
        idx -= kHiddenUnits;
        if (idx < kHiddenUnits) return probe.w2(idx);
        return probe.b2;
    };

    double worst = 0.0;
    for (long idx = 0; idx < analytic.size(); ++idx) {
        double& slot = param(idx);
        const double orig = slot;
        slot = orig + h;
        const double lp = mlp_loss(probe, Xs, y);
        slot = orig - h;
        const double lm = mlp_loss(probe, Xs, y);
        slot = orig;
        const double numeric = (lp - lm) / (2.0 * h);
        const double denom = std::max({1.0, std::abs(analytic(idx)), std::abs(numeric)});
        worst = std::max(worst, std::abs(analytic(idx) - numeric) / denom);
    }
    return worst;
}

int TrainedRegressor::input_dim() const {
    return static_cast<int>(std::visit(
        [](const auto& m) { return m.input.mean.size(); }, model));
}

double TrainedRegressor::predict(const Eigen::VectorXd& x) const {
    return std::visit(
        [&](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            Eigen::VectorXd xs = m.input.apply(x);
            if constexpr (std::is_same_v<T, LinearModel>) {
                return m.weights.dot(xs) + m.bias;
            } else if constexpr (std::is_same_v<T, Poly2Model>) {
                return m.weights.dot(poly2_expand(xs)) + m.bias;
            } else if constexpr (std::is_same_v<T, SvrModel>) {
                double acc = m.bias;
                for (long i = 0; i < m.duals.size(); ++i) {
                    const double d2 = (m.support_vectors.row(i).transpose() - xs).squaredNorm();
                    acc += m.duals(i) * std::exp(-m.gamma * d2);
                }
                return acc;
            } else {
                Eigen::VectorXd hidden = (m.w1 * xs + m.b1).array().tanh();
                return m.w2.dot(hidden) + m.b2;
            }
        },
        model);
}

Eigen::VectorXd TrainedRegressor::predict_all(const Eigen::MatrixXd& X) const {
    Eigen::VectorXd out(X.rows());
    for (long i = 0; i < X.rows(); ++i) out(i) = predict(X.row(i).transpose());
    return out;
}

TrainedRegressor fit(Kind kind, const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                     std::uint64_t seed, const FitParams& params) {
    if (X.rows() != y.size()) throw DataError("regressor fit: X rows and y length differ");
    if (X.cols() < 1) throw DataError("regressor fit: no input features");
    if (X.cols() > kMaxInputDim)
        throw DataError("regressor fit: " + std::to_string(X.cols()) +
                        " input features exceeds the soft limit of " +
                        std::to_string(kMaxInputDim));
    if (!X.allFinite() || !y.allFinite()) throw DataError("regressor fit: non-finite input");

    TrainedRegressor out;
    out.kind = kind;
    switch (kind) {
        case Kind::LR: out.model = fit_linear(X, y); break;
        case Kind::Poly2: out.model = fit_poly2(X, y); break;
        case Kind::SVR: out.model = fit_svr(X, y, params.svr); break;
        case Kind::MLP4: out.model = fit_mlp(X, y, seed, params.mlp); break;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Serialization (used inside the "TFUS" bundle container)
// ---------------------------------------------------------------------------

namespace {

void write_vector(std::ostream& os, const Eigen::VectorXd& v) {
    write_u32le(os, static_cast<std::uint32_t>(v.size()));
    for (long i = 0; i < v.size(); ++i) write_f64le(os, v(i));
}

Eigen::VectorXd read_vector(std::istream& is) {
    const std::uint32_t n = read_u32le(is);
    Eigen::VectorXd v(n);
    for (std::uint32_t i = 0; i < n; ++i) v(i) = read_f64le(is);
    return v;
}

void write_matrix(std::ostream& os, const Eigen::MatrixXd& m) {
    write_u32le(os, static_cast<std::uint32_t>(m.rows()));
    write_u32le(os, static_cast<std::uint32_t>(m.cols()));
    for (long r = 0; r < m.rows(); ++r)
        for (long c = 0; c < m.cols(); ++c) write_f64le(os, m(r, c));
}

Eigen::MatrixXd read_matrix(std::istream& is) {
    const std::uint32_t rows = read_u32le(is);
    const std::uint32_t cols = read_u32le(is);
    Eigen::MatrixXd m(rows, cols);
    for (std::uint32_t r = 0; r < rows; ++r)
        for (std::uint32_t c = 0; c < cols; ++c) m(r, c) = read_f64le(is);
    return m;
}

void write_standardizer(std::ostream& os, const Standardizer& s) {
    write_vector(os, s.mean);
    write_vector(os, s.scale);
}

Standardizer read_standardizer(std::istream& is) {
    Standardizer s;
    s.mean = read_vector(is);
    s.scale = read_vector(is);
    return s;
}

} // namespace

void save(std::ostream& os, const TrainedRegressor& model) {
    write_u32le(os, static_cast<std::uint32_t>(model.kind));
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            write_standardizer(os, m.input);
            if constexpr (std::is_same_v<T, LinearModel>) {
                write_vector(os, m.weights);
                write_f64le(os, m.bias);
            } else if constexpr (std::is_same_v<T, Poly2Model>) {
                write_vector(os, m.weights);
                write_f64le(os, m.bias);
                write_u32le(os, static_cast<std::uint32_t>(m.input_dim));
            } else if constexpr (std::is_same_v<T, SvrModel>) {
                write_matrix(os, m.support_vectors);
                write_vector(os, m.duals);
                write_f64le(os, m.bias);
                write_f64le(os, m.gamma);
                write_f64le(os, m.C);
                write_f64le(os, m.epsilon);
            } else {
                write_matrix(os, m.w1);
                write_vector(os, m.b1);
                write_vector(os, m.w2);
                write_f64le(os, m.b2);
            }
        },
        model.model);
}

TrainedRegressor load(std::istream& is) {
    TrainedRegressor out;
    const std::uint32_t kind = read_u32le(is);
    if (kind > 3) throw DataError("invalid regressor kind tag in model stream");
    out.kind = static_cast<Kind>(kind);
    switch (out.kind) {
        case Kind::LR: {
            LinearModel m;
            m.input = read_standardizer(is);
            m.weights = read_vector(is);
            m.bias = read_f64le(is);
            out.model = std::move(m);
            break;
        }
        case Kind::Poly2: {
            Poly2Model m;
            m.input = read_standardizer(is);
            m.weights = read_vector(is);
            m.bias = read_f64le(is);
            m.input_dim = static_cast<int>(read_u32le(is));
            out.model = std::move(m);
            break;
        }
        case Kind::SVR: {
            SvrModel m;
            m.input = read_standardizer(is);
            m.support_vectors = read_matrix(is);
            m.duals = read_vector(is);
            m.bias = read_f64le(is);
            m.gamma = read_f64le(is);
            m.C = read_f64le(is);
            m.epsilon = read_f64le(is);
            out.model = std::move(m);
            break;
        }
        case Kind::MLP4: {
            MlpModel m;
            m.input = read_standardizer(is);
            m.w1 = read_matrix(is);
            m.b1 = read_vector(is);
            m.w2 = read_vector(is);
            m.b2 = read_f64le(is);
            out.model = std::move(m);
            break;
        }
    }
    return out;
}

} // namespace tfus::reg
