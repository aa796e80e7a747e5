#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tfus/pgm.hpp"

namespace tfus::data {

// The ten acquisition sessions: pre-surgery plus nine follow-ups.
enum class Timepoint { pre, w1, w3, w6, w9, w12, w20, w26, w39, w52 };

inline constexpr std::array<Timepoint, 10> kTimepoints = {
    Timepoint::pre, Timepoint::w1,  Timepoint::w3,  Timepoint::w6,  Timepoint::w9,
    Timepoint::w12, Timepoint::w20, Timepoint::w26, Timepoint::w39, Timepoint::w52};

const std::string& to_string(Timepoint t);
Timepoint timepoint_from_string(const std::string& s);

// The six scored healing parameters, each on a 1 (healthy) .. 7 (severe) scale.
enum class Param { SCT, TT, STE, TE, TU, TisE };

inline constexpr std::array<Param, 6> kParams = {Param::SCT, Param::TT,  Param::STE,
                                                 Param::TE,  Param::TU,  Param::TisE};
inline constexpr int kNumParams = 6;

const std::string& to_string(Param p);
Param param_from_string(const std::string& s);

struct LabelSet {
    std::array<double, kNumParams> scores{}; // indexed by Param order above

    double operator[](Param p) const { return scores[static_cast<int>(p)]; }
    double& operator[](Param p) { return scores[static_cast<int>(p)]; }

    // Each score must lie in [1, 7].
    void validate(const std::string& context) const;

    bool operator==(const LabelSet&) const = default;
};

// One 2D axial slice: 16-bit intensities plus a binary tendon ROI mask.
struct MriSlice {
    std::string slice_id;
    int width = 0;
    int height = 0;
    std::vector<std::uint16_t> intensities; // row-major, width*height
    std::vector<std::uint8_t> roi;          // 0 or 1, same dims

    std::uint16_t intensity(int r, int c) const {
        return intensities[static_cast<std::size_t>(r) * width + c];
    }
    bool in_roi(int r, int c) const {
        return roi[static_cast<std::size_t>(r) * width + c] != 0;
    }
    long roi_count() const;
};

enum class DeepKind { Fc6Raw, Reduced };

inline constexpr int kDeepRawDim = 4096;
inline constexpr int kDeepReducedDim = 200;

struct DeepFeatureBlock {
    std::string slice_id;
    DeepKind kind = DeepKind::Fc6Raw;
    std::vector<double> activations; // 4096 for Fc6Raw, 200 for Reduced
};

struct StudyRecord {
    std::string patient_id;
    Timepoint timepoint = Timepoint::pre;
    std::vector<std::string> slices; // ordered slice ids, non-empty
    LabelSet labels;

    std::string study_id() const { return patient_id + "/" + to_string(timepoint); }
};

struct SliceSource {
    std::string image_path;
    std::string mask_path;
    std::string deep_path;

    bool operator==(const SliceSource&) const = default;
};

struct CohortManifest {
    std::vector<StudyRecord> studies;
    std::map<std::string, SliceSource> sources; // slice_id -> resolved paths

    std::vector<std::string> patients() const;  // unique, sorted
    std::size_t study_count() const { return studies.size(); }
    std::size_t slice_count() const;
    const StudyRecord* find_study(const std::string& patient_id, Timepoint t) const;
};

// Manifest CSV: header `patient_id,timepoint,slice_id,image_path,mask_path,
// deep_path,sct,tt,ste,te,tu,tise`, one row per slice. Relative paths resolve
// against the manifest's directory. Leading '#' lines are artifact stamps.
CohortManifest load_manifest(const std::string& path);

void save_manifest(const CohortManifest& manifest, const std::string& path,
                   const std::vector<std::string>& stamps = {});

// Reads and validates one slice (dims match, mask strictly 0/255, ROI non-empty).
MriSlice load_slice(const CohortManifest& manifest, const std::string& slice_id);

// Reads one deep block (single CSV row of 4096 or 200 reals).
DeepFeatureBlock load_deep_block(const CohortManifest& manifest, const std::string& slice_id);

// Partition by patient; holdout ids must all exist in the manifest.
std::pair<CohortManifest, CohortManifest> split_test_holdout(
    const CohortManifest& manifest, const std::set<std::string>& patient_ids);

// Seeded shuffle of the sorted patient list, dealt round-robin into k folds.
std::vector<std::set<std::string>> make_folds(const CohortManifest& manifest, int k,
                                              std::uint64_t seed);

} // namespace tfus::data
