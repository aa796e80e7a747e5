#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tfus/data_model.hpp"

namespace tfus::synth {

// Deterministic phantom cohort: per-patient monotone severity trajectories,
// slice texture/area/brightness driven by the latents, low-rank deep blocks,
// labels derived from the recorded latents. Stands in for the private
// clinical data.

struct SynthConfig {
    int n_patients = 48;
    int studies_per_patient = 10; // one per timepoint; at most 10
    int slices_min = 30;
    int slices_max = 50;
    int width = 64;
    int height = 64;
    double noise_sigma = 0.01; // deep-block isotropic noise; image noise scales with it
    int deep_dim = 4096;
    std::uint64_t seed = 1;

    void validate() const;
    std::uint64_t hash() const;
};

inline constexpr int kDeepRank = 6;

// Study-level latent state, all recorded in factors.csv.
struct StudyLatents {
    double severity = 4.0;              // s(t) in [1, 7]
    std::array<double, 5> deep_factors{}; // u2..u6, standard normals
    double v_area = 0.0;                // hand-side factors
    double v_mean = 0.0;
};

// The documented label map: base + slope * (s - 4) + 0.25 * (three
// parameter-specific deep factors + v_area + v_mean), clamped to [1, 7].
double true_label(data::Param p, const StudyLatents& latents);

// Names of the six planted informative factors per parameter, matching
// factors.csv column names ("severity", "u2".."u6", "v_area", "v_mean").
std::vector<std::string> planted_factors(data::Param p);

struct GeneratedCohort {
    std::string manifest_path;
    std::string ledger_path;
    std::string factors_path;
    long studies = 0;
    long slices = 0;
};

// Writes manifest.csv, ledger.csv, factors.csv, images/, masks/, deep/ under
// out_dir. Same config (incl. seed) -> byte-identical tree.
GeneratedCohort generate(const SynthConfig& config, const std::string& out_dir);

// In-memory planted rank-6 activations for PCA validation: per-sample signal
// norm equals snr * sigma * sqrt(dim), plus isotropic N(0, sigma^2) noise.
Eigen::MatrixXd make_deep_activations(int n, int dim, double sigma, double snr,
                                      std::uint64_t seed);

} // namespace tfus::synth
