#include "tfus/data_model.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "tfus/csv.hpp"
#include "tfus/errors.hpp"

namespace fs = std::filesystem;

namespace tfus::data {

namespace {

const std::array<std::string, 10> kTimepointNames = {"pre", "w1",  "w3",  "w6",  "w9",
                                                     "w12", "w20", "w26", "w39", "w52"};
const std::array<std::string, 6> kParamNames = {"SCT", "TT", "STE", "TE", "TU", "TisE"};

const std::vector<std::string> kManifestHeader = {
    "patient_id", "timepoint", "slice_id", "image_path", "mask_path", "deep_path",
    "sct",        "tt",        "ste",      "te",         "tu",        "tise"};

std::string resolve_path(const fs::path& base_dir, const std::string& p) {
    fs::path path(p);
    if (path.is_absolute()) return path.lexically_normal().string();
    return (base_dir / path).lexically_normal().string();
}

} // namespace

const std::string& to_string(Timepoint t) { return kTimepointNames[static_cast<int>(t)]; }

Timepoint timepoint_from_string(const std::string& s) {
    for (std::size_t i = 0; i < kTimepointNames.size(); ++i)
        if (kTimepointNames[i] == s) return static_cast<Timepoint>(i);
    throw DataError("unknown timepoint '" + s + "'");
}

const std::string& to_string(Param p) { return kParamNames[static_cast<int>(p)]; }

Param param_from_string(const std::string& s) {
    for (std::size_t i = 0; i < kParamNames.size(); ++i)
        if (kParamNames[i] == s) return static_cast<Param>(i);
    throw DataError("unknown parameter '" + s + "'");
}

void LabelSet::validate(const std::string& context) const {
    for (Param p : kParams) {
        double v = (*this)[p];
        if (!(v >= 1.0 && v <= 7.0))
            throw DataError("label out of range [1,7]: " + to_string(p) + "=" +
                            csv::format_double(v) + " (" + context + ")");
    }
}

long MriSlice::roi_count() const {
    long n = 0;
    for (auto v : roi) n += (v != 0);
    return n;
}

std::vector<std::string> CohortManifest::patients() const {
    std::set<std::string> ids;
    for (const auto& s : studies) ids.insert(s.patient_id);
    return {ids.begin(), ids.end()};
}

std::size_t CohortManifest::slice_count() const {
    std::size_t n = 0;
    for (const auto& s : studies) n += s.slices.size();
    return n;
}

const StudyRecord* CohortManifest::find_study(const std::string& patient_id, Timepoint t) const {
    for (const auto& s : studies)
        if (s.patient_id == patient_id && s.timepoint == t) return &s;
    return nullptr;
}

CohortManifest load_manifest(const std::string& path) {
    csv::Table table = csv::read_file(path);
    if (table.header != kManifestHeader) {
        throw DataError("manifest header mismatch in " + path + "; expected '" +
                        csv::join_line(kManifestHeader) + "'");
    }
    const fs::path base_dir = fs::path(path).parent_path();

    CohortManifest m;
    std::map<std::pair<std::string, Timepoint>, std::size_t> study_index;

    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        const std::string where = path + ":" + std::to_string(table.row_lines[i]);
        if (row.size() != kManifestHeader.size())
            throw DataError("wrong column count (" + std::to_string(row.size()) + ") at " + where);

        const std::string& patient_id = row[0];
        if (patient_id.empty()) throw DataError("empty patient_id at " + where);
        Timepoint tp;
        try {
            tp = timepoint_from_string(row[1]);
        } catch (const DataError& e) {
            throw DataError(std::string(e.what()) + " at " + where);
        }
        const std::string& slice_id = row[2];
        if (slice_id.empty()) throw DataError("empty slice_id at " + where);
        if (m.sources.count(slice_id))
            throw DataError("duplicate slice_id '" + slice_id + "' at " + where);

        SliceSource src;
        src.image_path = resolve_path(base_dir, row[3]);
        src.mask_path = resolve_path(base_dir, row[4]);
        src.deep_path = resolve_path(base_dir, row[5]);
        for (const auto* p : {&src.image_path, &src.mask_path, &src.deep_path}) {
            if (!fs::exists(*p))
                throw DataError("referenced file missing: " + *p + " at " + where);
        }

        LabelSet labels;
        for (int k = 0; k < kNumParams; ++k)
            labels.scores[k] = csv::parse_double(row[6 + k], kManifestHeader[6 + k] + " at " + where);
        try {
            labels.validate("row");
        } catch (const DataError& e) {
            throw DataError(std::string(e.what()) + " at " + where);
        }

        auto key = std::make_pair(patient_id, tp);
        auto it = study_index.find(key);
        if (it == study_index.end()) {
            StudyRecord rec;
            rec.patient_id = patient_id;
            rec.timepoint = tp;
            rec.labels = labels;
            rec.slices.push_back(slice_id);
            study_index.emplace(key, m.studies.size());
            m.studies.push_back(std::move(rec));
        } else {
            StudyRecord& rec = m.studies[it->second];
            if (!(rec.labels == labels))
                throw DataError("labels differ within study " + rec.study_id() + " at " + where);
            rec.slices.push_back(slice_id);
        }
        m.sources.emplace(slice_id, std::move(src));
    }

    // Timepoints are unique per patient by construction of the study key;
    // studies themselves must be non-empty.
    if (m.studies.empty()) throw DataError("manifest has no data rows: " + path);
    return m;
}

void save_manifest(const CohortManifest& manifest, const std::string& path,
                   const std::vector<std::string>& stamps) {
    std::ofstream os(path);
    if (!os) throw DataError("cannot write manifest: " + path);
    for (const auto& s : stamps) os << "# " << s << "\n";
    os << csv::join_line(kManifestHeader) << "\n";
    for (const auto& study : manifest.studies) {
        for (const auto& slice_id : study.slices) {
            const SliceSource& src = manifest.sources.at(slice_id);
            std::vector<std::string> row = {study.patient_id, to_string(study.timepoint),
                                            slice_id,         src.image_path,
                                            src.mask_path,    src.deep_path};
            for (int k = 0; k < kNumParams; ++k)
                row.push_back(csv::format_double(study.labels.scores[k]));
            os << csv::join_line(row) << "\n";
        }
    }
    if (!os) throw DataError("short write on manifest: " + path);
}

MriSlice load_slice(const CohortManifest& manifest, const std::string& slice_id) {
    auto it = manifest.sources.find(slice_id);
    if (it == manifest.sources.end()) throw DataError("unknown slice_id '" + slice_id + "'");
    const SliceSource& src = it->second;

    pgm::Image16 img = pgm::read_image16(src.image_path);
    pgm::Image8 mask = pgm::read_image8(src.mask_path);
    if (img.width != mask.width || img.height != mask.height)
        throw DataError("dimension mismatch between image and mask for slice '" + slice_id +
                        "': " + std::to_string(img.width) + "x" + std::to_string(img.height) +
                        " vs " + std::to_string(mask.width) + "x" + std::to_string(mask.height));

    MriSlice s;
    s.slice_id = slice_id;
    s.width = img.width;
    s.height = img.height;
    s.intensities = std::move(img.pixels);
    s.roi.resize(mask.pixels.size());
    long roi_pixels = 0;
    for (std::size_t i = 0; i < mask.pixels.size(); ++i) {
        if (mask.pixels[i] == 255) {
            s.roi[i] = 1;
            ++roi_pixels;
        } else if (mask.pixels[i] == 0) {
            s.roi[i] = 0;
        } else {
            throw DataError("mask value " + std::to_string(mask.pixels[i]) +
                            " is neither 0 nor 255 in slice '" + slice_id + "'");
        }
    }
    if (roi_pixels == 0) throw DataError("empty ROI in slice '" + slice_id + "'");
    return s;
}

DeepFeatureBlock load_deep_block(const CohortManifest& manifest, const std::string& slice_id) {
    auto it = manifest.sources.find(slice_id);
    if (it == manifest.sources.end()) throw DataError("unknown slice_id '" + slice_id + "'");
    const std::string& path = it->second.deep_path;

    std::ifstream is(path);
    if (!is) throw DataError("cannot open deep block: " + path);
    std::string content;
    std::getline(is, content);
    if (!content.empty() && content.back() == '\r') content.pop_back();

    DeepFeatureBlock block;
    block.slice_id = slice_id;
    block.activations.reserve(kDeepRawDim);
    const char* p = content.data();
    const char* end = p + content.size();
    while (p < end) {
        double v;
        auto [next, ec] = std::from_chars(p, end, v);
        if (ec != std::errc())
            throw DataError("malformed deep block value in " + path);
        block.activations.push_back(v);
        p = next;
        if (p < end) {
            if (*p != ',') throw DataError("malformed deep block separator in " + path);
            ++p;
        }
    }
    if (block.activations.size() == kDeepRawDim) {
        block.kind = DeepKind::Fc6Raw;
    } else if (block.activations.size() == kDeepReducedDim) {
        block.kind = DeepKind::Reduced;
    } else {
        throw DataError("deep block length " + std::to_string(block.activations.size()) +
                        " is neither 4096 nor 200: " + path);
    }
    return block;
}

std::pair<CohortManifest, CohortManifest> split_test_holdout(
    const CohortManifest& manifest, const std::set<std::string>& patient_ids) {
    const auto all = manifest.patients();
    for (const auto& id : patient_ids) {
        if (!std::binary_search(all.begin(), all.end(), id))
            throw DataError("unknown patient id in holdout set: '" + id + "'");
    }
    CohortManifest train, test;
    for (const auto& study : manifest.studies) {
        CohortManifest& dst = patient_ids.count(study.patient_id) ? test : train;
        dst.studies.push_back(study);
        for (const auto& slice_id : study.slices)
            dst.sources.emplace(slice_id, manifest.sources.at(slice_id));
    }
    return {std::move(train), std::move(test)};
}

std::vector<std::set<std::string>> make_folds(const CohortManifest& manifest, int k,
                                              std::uint64_t seed) {
    if (k <= 0) throw ConfigError("fold count must be positive");
    std::vector<std::string> ids = manifest.patients();
    if (static_cast<std::size_t>(k) > ids.size())
        throw ConfigError("fold count " + std::to_string(k) + " exceeds patient count " +
                          std::to_string(ids.size()));

    // Fisher-Yates with explicit draws so the assignment is stable across
    // standard library implementations.
    std::mt19937_64 rng(seed);
    for (std::size_t i = ids.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(ids[i - 1], ids[j]);
    }
    std::vector<std::set<std::string>> folds(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < ids.size(); ++i)
        folds[i % static_cast<std::size_t>(k)].insert(ids[i]);
    return folds;
}

} // namespace tfus::data
