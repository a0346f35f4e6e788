#include "inkgrain/config.hpp"

#include <fstream>
#include <set>

#include "inkgrain/error.hpp"

namespace inkgrain {
namespace {

namespace fs = std::filesystem;

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
    if (!j.is_object()) throw ParameterError(where + " must be a JSON object");
    for (const auto& [key, _] : j.items())
        if (!known.contains(key)) throw ParameterError("unknown key '" + key + "' in " + where);
}

template <typename T>
void read_opt(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

AnalysisConfig analysis_config_from_json(const json& j) {
    AnalysisConfig c;
    try {
        reject_unknown(j, {"segmentation", "bandpass", "white_percentile", "seed"}, "config");
        if (j.contains("segmentation")) {
            const json& s = j.at("segmentation");
            reject_unknown(s,
                           {"contrast_lo", "contrast_hi", "window", "offset", "k",
                            "confidence_margin", "max_exemplars", "min_ink_contrast", "seed"},
                           "segmentation");
            auto& p = c.segmentation;
            read_opt(s, "contrast_lo", p.contrast_lo);
            read_opt(s, "contrast_hi", p.contrast_hi);
            read_opt(s, "window", p.window);
            read_opt(s, "offset", p.offset);
            read_opt(s, "k", p.k);
            read_opt(s, "confidence_margin", p.confidence_margin);
            read_opt(s, "max_exemplars", p.max_exemplars);
            read_opt(s, "min_ink_contrast", p.min_ink_contrast);
            read_opt(s, "seed", p.seed);
        }
        if (j.contains("bandpass")) {
            const json& b = j.at("bandpass");
            reject_unknown(b, {"f_lo", "f_hi", "order"}, "bandpass");
            read_opt(b, "f_lo", c.bandpass.f_lo);
            read_opt(b, "f_hi", c.bandpass.f_hi);
            read_opt(b, "order", c.bandpass.order);
        }
        read_opt(j, "white_percentile", c.white_percentile);
        if (j.contains("seed")) c.segmentation.seed = j.at("seed").get<std::uint64_t>();
    } catch (const json::exception& e) {
        throw ParameterError(std::string("malformed config: ") + e.what());
    }
    c.segmentation.validate();
    c.bandpass.validate();
    if (!(c.white_percentile > 0.0 && c.white_percentile < 1.0))
        throw ParameterError("white_percentile must lie in (0,1)");
    return c;
}

AnalysisConfig load_analysis_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config: " + path.string());
    try {
        return analysis_config_from_json(json::parse(in));
    } catch (const json::parse_error& e) {
        throw ParameterError("config " + path.string() + " is not valid JSON: " + e.what());
    }
}

json to_json(const SegmentationParams& p) {
    return {{"contrast_lo", p.contrast_lo},
            {"contrast_hi", p.contrast_hi},
            {"window", p.window},
            {"offset", p.offset},
            {"k", p.k},
            {"confidence_margin", p.confidence_margin},
            {"max_exemplars", p.max_exemplars},
            {"min_ink_contrast", p.min_ink_contrast},
            {"seed", p.seed}};
}

json to_json(const BandPassSpec& s) {
    return {{"f_lo", s.f_lo}, {"f_hi", s.f_hi}, {"order", s.order}};
}

json to_json(const AnalysisConfig& c) {
    return {{"segmentation", to_json(c.segmentation)},
            {"bandpass", to_json(c.bandpass)},
            {"white_percentile", c.white_percentile}};
}

json to_json(const SimConfig& c) {
    return {{"cyan_level", c.cyan_level},
            {"magenta_level", c.magenta_level},
            {"dpi", c.dpi},
            {"patch_mm", {c.patch_width_mm, c.patch_height_mm}},
            {"drop_diameter_um", c.drop_diameter_um},
            {"diameter_cv", c.diameter_cv},
            {"placement_jitter_um", c.placement_jitter_um},
            {"avoidance", c.avoidance},
            {"noise_sigma", c.noise_sigma},
            {"seed", c.seed}};
}

json to_json(const MetricReport& r) {
    json per_class;
    for (Label l : kAllLabels) per_class[std::string(label_key(l))] = r.per_class_iou[index_of(l)];
    json confusion = json::array();
    for (const auto& row : r.confusion) confusion.push_back(row);
    return {{"mean_iou", r.mean_iou},
            {"pixel_accuracy", r.pixel_accuracy},
            {"per_class_iou", per_class},
            {"iou_pc_strict", r.per_class_iou[index_of(Label::PC)]},
            {"iou_cyan_incl_overlap", r.iou_cyan_incl_overlap},
            {"iou_pm_strict", r.per_class_iou[index_of(Label::PM)]},
            {"iou_magenta_incl_overlap", r.iou_magenta_incl_overlap},
            {"pixel_counts", {{"order", {"pc", "pm", "o", "w"}}, {"confusion_truth_by_pred", confusion}}}};
}

json to_json(const ReflectanceModel& m) {
    return {{"r_pc", m.r_pc},
            {"r_pm", m.r_pm},
            {"r_o", m.r_o},
            {"r_w", m.r_w},
            {"residual_rms", m.residual_rms},
            {"n_patches", m.n_patches},
            {"warnings", m.warnings}};
}

json to_json(const GrainReport& r) {
    json per;
    for (Label l : kAllLabels) per[std::string(label_key(l))] = optional_number(r.component[index_of(l)]);
    return {{"correlation", per}, {"reconstruction_correlation", optional_number(r.reconstruction)}};
}

json to_json(const CoverageRatios& c) {
    return {{"a_pc", c.a_pc}, {"a_pm", c.a_pm}, {"a_o", c.a_o}, {"a_w", c.a_w}};
}

ReflectanceModel model_from_json(const json& j) {
    try {
        ReflectanceModel m;
        m.r_pc = j.at("r_pc").get<double>();
        m.r_pm = j.at("r_pm").get<double>();
        m.r_o = j.at("r_o").get<double>();
        m.r_w = j.at("r_w").get<double>();
        m.residual_rms = j.value("residual_rms", 0.0);
        m.n_patches = j.value("n_patches", 0);
        if (j.contains("warnings")) m.warnings = j.at("warnings").get<std::vector<std::string>>();
        return m;
    } catch (const json::exception& e) {
        throw ParameterError(std::string("malformed model JSON: ") + e.what());
    }
}

std::vector<ManifestEntry> read_manifest(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open manifest: " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParameterError("manifest " + path.string() + " is not valid JSON: " + e.what());
    }
    if (!j.is_array()) throw ParameterError("manifest must be a JSON array");
    const fs::path base = path.parent_path();
    auto resolve = [&](const std::string& p) {
        const fs::path q(p);
        return q.is_absolute() ? q : base / q;
    };
    std::vector<ManifestEntry> out;
    try {
        for (const json& e : j) {
            ManifestEntry m;
            m.id = e.at("id").get<std::string>();
            m.cyan_level = e.at("cyan_level").get<double>();
            m.magenta_level = e.at("magenta_level").get<double>();
            m.image_path = resolve(e.at("image_path").get<std::string>());
            if (e.contains("truth_path") && !e.at("truth_path").is_null())
                m.truth_path = resolve(e.at("truth_path").get<std::string>());
            out.push_back(std::move(m));
        }
    } catch (const json::exception& e) {
        throw ParameterError("malformed manifest entry: " + std::string(e.what()));
    }
    return out;
}

json manifest_to_json(const std::vector<ManifestEntry>& entries, const fs::path& relative_to) {
    json arr = json::array();
    for (const auto& e : entries) {
        json o = {{"id", e.id},
                  {"cyan_level", e.cyan_level},
                  {"magenta_level", e.magenta_level},
                  {"image_path", e.image_path.lexically_relative(relative_to).generic_string()}};
        if (e.truth_path)
            o["truth_path"] = e.truth_path->lexically_relative(relative_to).generic_string();
        arr.push_back(std::move(o));
    }
    return arr;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace inkgrain
