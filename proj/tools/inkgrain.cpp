// inkgrain: segmentation, reflectance-model fitting and graininess
// attribution over a manifest of scanned (or simulated) patches.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "inkgrain/colorimetry.hpp"
#include "inkgrain/config.hpp"
#include "inkgrain/error.hpp"
#include "inkgrain/image_io.hpp"
#include "inkgrain/metrics.hpp"
#include "inkgrain/pipeline.hpp"
#include "inkgrain/synthesis.hpp"

namespace fs = std::filesystem;
using namespace inkgrain;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitData = 1;
constexpr int kExitUsage = 2;

/// Bad invocation: missing inputs, empty manifest, malformed config.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Processing failure on otherwise well-formed input.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Globals {
    std::string config_path;
    double dpi = io::kDefaultDpi;
    std::uint64_t seed = 42;
    bool seed_given = false;
    int jobs = 1;
    fs::path out = ".";
};

struct Context {
    Globals g;
    AnalysisConfig cfg;
};

Context make_context(const Globals& g) {
    Context ctx{g, {}};
    if (!g.config_path.empty()) {
        try {
            ctx.cfg = load_analysis_config(g.config_path);
        } catch (const Error& e) {
            throw UsageError(e.what());
        }
    }
    if (g.seed_given || g.config_path.empty()) ctx.cfg.segmentation.seed = g.seed;
    if (!(g.dpi > 0.0)) throw UsageError("--dpi must be positive");
    try {
        ctx.cfg.segmentation.validate();
        ctx.cfg.bandpass.validate();
    } catch (const ParameterError& e) {
        throw UsageError(e.what());
    }
    return ctx;
}

json params_json(const Context& ctx) {
    return {{"seed", ctx.cfg.segmentation.seed}, {"dpi", ctx.g.dpi}, {"analysis", to_json(ctx.cfg)}};
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string opt_num(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

std::vector<ManifestEntry> load_manifest(const fs::path& path) {
    std::vector<ManifestEntry> entries;
    try {
        entries = read_manifest(path);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    if (entries.empty()) throw UsageError("manifest " + path.string() + " lists no patches");
    return entries;
}

fs::path label_path(const fs::path& dir, const std::string& id) { return dir / (id + ".png"); }

struct PatchError {
    std::string id;
    std::string message;
};

json errors_json(const std::vector<PatchError>& errors) {
    json arr = json::array();
    for (const auto& e : errors) arr.push_back({{"id", e.id}, {"error", e.message}});
    return arr;
}

void report(const std::vector<PatchError>& errors) {
    for (const auto& e : errors) std::cerr << "inkgrain: patch " << e.id << ": " << e.message << "\n";
}

/// Runs `fn` per manifest entry in parallel; failures are collected per patch.
template <class Fn>
std::vector<PatchError> for_each_patch(const std::vector<ManifestEntry>& entries, int jobs, Fn fn) {
    std::vector<std::optional<std::string>> failures(entries.size());
    parallel_for(entries.size(), jobs, [&](std::size_t i) {
        try {
            fn(i);
        } catch (const std::bad_alloc&) {
            throw;
        } catch (const std::exception& e) {
            failures[i] = e.what();
        }
    });
    std::vector<PatchError> out;
    for (std::size_t i = 0; i < entries.size(); ++i)
        if (failures[i]) out.push_back({entries[i].id, *failures[i]});
    return out;
}

/// Paper white from the dataset's blank patches, if it has any.
std::optional<double> dataset_white(const std::vector<ManifestEntry>& entries, const Context& ctx) {
    std::vector<RasterImage> blanks;
    for (const auto& e : entries)
        if (e.cyan_level == 0.0 && e.magenta_level == 0.0) blanks.push_back(io::read_png(e.image_path, ctx.g.dpi));
    std::vector<const RasterImage*> ptrs;
    for (const auto& b : blanks) ptrs.push_back(&b);
    return blank_white_level(ptrs, ctx.cfg.white_percentile);
}

std::optional<LabelMap> stored_labels(const std::optional<fs::path>& dir, const std::string& id) {
    if (!dir) return std::nullopt;
    return io::read_label_png(label_path(*dir, id));
}

// ---- simulate -------------------------------------------------------------

struct SimulateArgs {
    double cyan = 0.0;
    double magenta = 0.0;
    std::string id;
    bool grid = false;
    SimConfig sim;
};

int cmd_simulate(const Context& ctx, SimulateArgs a) {
    SimConfig base = a.sim;
    base.dpi = ctx.g.dpi;
    base.seed = ctx.cfg.segmentation.seed;

    std::vector<SimConfig> configs;
    std::vector<std::string> ids;
    if (a.grid) {
        const double levels[] = {0, 30, 45, 60, 75, 90};
        std::uint64_t k = 0;
        for (double c : levels)
            for (double m : levels) {
                SimConfig s = base;
                s.cyan_level = c / 100.0;
                s.magenta_level = m / 100.0;
                s.seed = base.seed + k++;
                configs.push_back(s);
                ids.push_back("c" + num(c) + "_m" + num(m));
            }
    } else {
        SimConfig s = base;
        s.cyan_level = a.cyan / 100.0;
        s.magenta_level = a.magenta / 100.0;
        configs.push_back(s);
        ids.push_back(a.id.empty() ? "c" + num(a.cyan) + "_m" + num(a.magenta) : a.id);
    }
    try {
        for (const auto& s : configs) s.validate();
    } catch (const ParameterError& e) {
        throw UsageError(e.what());
    }

    const fs::path out = ctx.g.out;
    std::vector<ManifestEntry> entries(configs.size());
    parallel_for(configs.size(), ctx.g.jobs, [&](std::size_t i) {
        const SimulatedPatch p = simulate_patch(configs[i]);
        ManifestEntry& e = entries[i];
        e.id = ids[i];
        e.cyan_level = configs[i].cyan_level * 100.0;
        e.magenta_level = configs[i].magenta_level * 100.0;
        e.image_path = out / "images" / (ids[i] + ".png");
        e.truth_path = out / "truth" / (ids[i] + ".png");
        io::write_png_rgb16(e.image_path, p.image);
        io::write_label_png(*e.truth_path, p.truth, configs[i].dpi);
        json side = {{"id", ids[i]}, {"simulation", to_json(configs[i])}, {"truth_coverage", to_json(coverage_ratios(p.truth))}};
        io::write_text_atomic(out / "sidecars" / (ids[i] + ".json"), dump(side));
    });
    io::write_text_atomic(out / "manifest.json", dump(manifest_to_json(entries, out)));
    std::cout << "wrote " << entries.size() << " patch(es) and " << (out / "manifest.json").string() << "\n";
    return kExitOk;
}

// ---- segment / evaluate ---------------------------------------------------

json metrics_summary(const std::vector<std::optional<MetricReport>>& reports) {
    double miou = 0, acc = 0, cyan = 0, magenta = 0;
    int n = 0;
    for (const auto& r : reports)
        if (r) {
            miou += r->mean_iou;
            acc += r->pixel_accuracy;
            cyan += r->iou_cyan_incl_overlap;
            magenta += r->iou_magenta_incl_overlap;
            ++n;
        }
    if (n == 0) return nullptr;
    return {{"patches", n},
            {"mean_iou", miou / n},
            {"pixel_accuracy", acc / n},
            {"iou_cyan_incl_overlap", cyan / n},
            {"iou_magenta_incl_overlap", magenta / n}};
}

json metrics_document(const Context& ctx, const std::vector<ManifestEntry>& entries,
                      const std::vector<std::optional<MetricReport>>& reports,
                      const std::vector<PatchError>& errors) {
    json patches = json::array();
    for (std::size_t i = 0; i < entries.size(); ++i)
        if (reports[i])
            patches.push_back({{"id", entries[i].id},
                               {"cyan_level", entries[i].cyan_level},
                               {"magenta_level", entries[i].magenta_level},
                               {"metrics", to_json(*reports[i])}});
    return {{"params", params_json(ctx)}, {"summary", metrics_summary(reports)}, {"patches", patches}, {"errors", errors_json(errors)}};
}

int finish(const std::vector<PatchError>& errors) {
    report(errors);
    return errors.empty() ? kExitOk : kExitData;
}

int cmd_segment(const Context& ctx, const fs::path& manifest, bool with_truth) {
    const auto entries = load_manifest(manifest);
    const fs::path labels_dir = ctx.g.out / "labels";
    std::vector<std::optional<MetricReport>> reports(entries.size());
    const auto errors = for_each_patch(entries, ctx.g.jobs, [&](std::size_t i) {
        const ManifestEntry& e = entries[i];
        std::optional<LabelMap> truth;
        if (with_truth) {
            if (!e.truth_path) throw DataError("manifest entry has no truth_path");
            truth = io::read_label_png(*e.truth_path);
        }
        const RasterImage img = io::read_png(e.image_path, ctx.g.dpi);
        const LabelMap labels = segment_patch(img, ctx.cfg.segmentation);
        io::write_label_png(label_path(labels_dir, e.id), labels, img.dpi());
        if (truth) reports[i] = evaluate_labels(labels, *truth);
    });

    json patches = json::array();
    for (std::size_t i = 0; i < entries.size(); ++i)
        patches.push_back({{"id", entries[i].id}, {"labels", label_path("labels", entries[i].id).generic_string()}});
    io::write_text_atomic(ctx.g.out / "segment.json",
                          dump({{"params", params_json(ctx)}, {"patches", patches}, {"errors", errors_json(errors)}}));
    if (with_truth) {
        const json doc = metrics_document(ctx, entries, reports, errors);
        io::write_text_atomic(ctx.g.out / "metrics.json", dump(doc));
        if (!doc["summary"].is_null())
            std::cout << "mean IoU " << num(doc["summary"]["mean_iou"].get<double>()) << ", pixel accuracy "
                      << num(doc["summary"]["pixel_accuracy"].get<double>()) << "\n";
    }
    return finish(errors);
}

int cmd_evaluate(const Context& ctx, const std::string& manifest, const std::string& labels_dir,
                 const std::string& pred, const std::string& truth) {
    if (!pred.empty() || !truth.empty()) {
        if (pred.empty() || truth.empty()) throw UsageError("--pred and --truth go together");
        const MetricReport r = evaluate_labels(io::read_label_png(pred), io::read_label_png(truth));
        json doc = {{"params", params_json(ctx)}, {"pred", pred}, {"truth", truth}, {"metrics", to_json(r)}};
        io::write_text_atomic(ctx.g.out / "evaluation.json", dump(doc));
        std::cout << "mean IoU " << num(r.mean_iou) << ", pixel accuracy " << num(r.pixel_accuracy) << "\n";
        return kExitOk;
    }
    if (manifest.empty()) throw UsageError("evaluate needs --manifest or --pred/--truth");
    const auto entries = load_manifest(manifest);
    const fs::path dir = labels_dir.empty() ? ctx.g.out / "labels" : fs::path(labels_dir);
    std::vector<std::optional<MetricReport>> reports(entries.size());
    const auto errors = for_each_patch(entries, ctx.g.jobs, [&](std::size_t i) {
        const ManifestEntry& e = entries[i];
        if (!e.truth_path) throw DataError("manifest entry has no truth_path");
        reports[i] = evaluate_labels(io::read_label_png(label_path(dir, e.id)), io::read_label_png(*e.truth_path));
    });
    io::write_text_atomic(ctx.g.out / "evaluation.json", dump(metrics_document(ctx, entries, reports, errors)));
    return finish(errors);
}

// ---- fit-model ------------------------------------------------------------

int cmd_fit_model(const Context& ctx, const fs::path& manifest, const std::optional<fs::path>& labels_dir) {
    const auto entries = load_manifest(manifest);
    const std::optional<double> white = dataset_white(entries, ctx);
    std::vector<PatchRecord> records(entries.size());
    const auto errors = for_each_patch(entries, ctx.g.jobs, [&](std::size_t i) {
        const ManifestEntry& e = entries[i];
        const RasterImage img = io::read_png(e.image_path, ctx.g.dpi);
        records[i] = analyze_patch(e.id, e.cyan_level, e.magenta_level, img, ctx.cfg, white,
                                   stored_labels(labels_dir, e.id))
                         .record;
    });
    if (!errors.empty()) return finish(errors);
    if (records.size() < 4)
        throw DataError("the fit needs at least 4 patches, manifest has " + std::to_string(records.size()));

    const ReflectanceModel model = fit_reflectance_model(records);
    for (const auto& w : model.warnings) std::cerr << "inkgrain: warning: " << w << "\n";

    json doc = to_json(model);
    doc["params"] = params_json(ctx);
    doc["white_level"] = white ? json(*white) : json(nullptr);
    doc["white_source"] = white ? "blank patches" : "per-patch percentile";
    json recs = json::array();
    std::ostringstream csv;
    csv << "patch_id,cyan_level,magenta_level,a_pc,a_pm,a_o,a_w,measured,predicted\n";
    for (const auto& r : records) {
        const double pred = predict_total_reflectance(r.coverage, model);
        recs.push_back({{"id", r.id},
                        {"cyan_level", r.cyan_level},
                        {"magenta_level", r.magenta_level},
                        {"coverage", to_json(r.coverage)},
                        {"measured", r.total_reflectance},
                        {"predicted", pred}});
        csv << r.id << ',' << num(r.cyan_level) << ',' << num(r.magenta_level) << ',' << num(r.coverage.a_pc) << ','
            << num(r.coverage.a_pm) << ',' << num(r.coverage.a_o) << ',' << num(r.coverage.a_w) << ','
            << num(r.total_reflectance) << ',' << num(pred) << '\n';
    }
    doc["records"] = recs;
    io::write_text_atomic(ctx.g.out / "model.json", dump(doc));
    io::write_text_atomic(ctx.g.out / "fit_scatter.csv", csv.str());
    std::cout << "r_pc " << num(model.r_pc) << ", r_pm " << num(model.r_pm) << ", r_o " << num(model.r_o) << ", r_w "
              << num(model.r_w) << ", rms " << num(model.residual_rms) << "\n";
    return kExitOk;
}

// ---- grain ----------------------------------------------------------------

int cmd_grain(const Context& ctx, const fs::path& manifest, const fs::path& model_path,
              const std::optional<fs::path>& labels_dir) {
    if (!fs::exists(model_path)) throw UsageError("model file not found: " + model_path.string());
    ReflectanceModel model;
    try {
        std::ifstream in(model_path);
        model = model_from_json(json::parse(in));
    } catch (const json::exception& e) {
        throw UsageError("model " + model_path.string() + " is not valid JSON: " + e.what());
    } catch (const ParameterError& e) {
        throw UsageError(e.what());
    }
    const auto entries = load_manifest(manifest);
    const std::optional<double> white = dataset_white(entries, ctx);

    std::vector<std::optional<GrainReport>> reports(entries.size());
    const auto errors = for_each_patch(entries, ctx.g.jobs, [&](std::size_t i) {
        const ManifestEntry& e = entries[i];
        const RasterImage img = io::read_png(e.image_path, ctx.g.dpi);
        const PatchAnalysis a = analyze_patch(e.id, e.cyan_level, e.magenta_level, img, ctx.cfg, white,
                                              stored_labels(labels_dir, e.id));
        reports[i] = component_grain_correlations(a.labels, a.reflectance, model, ctx.cfg.bandpass);
    });

    std::vector<GrainReport> ok;
    std::ostringstream csv;
    csv << "patch_id,cyan_level,magenta_level,corr_pc,corr_pm,corr_o,corr_w,corr_recon\n";
    auto row = [&](const std::string& id, const std::string& c, const std::string& m, const GrainReport& r) {
        csv << id << ',' << c << ',' << m;
        for (const auto& v : r.component) csv << ',' << opt_num(v);
        csv << ',' << opt_num(r.reconstruction) << '\n';
    };
    json patches = json::array();
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (!reports[i]) continue;
        row(entries[i].id, num(entries[i].cyan_level), num(entries[i].magenta_level), *reports[i]);
        ok.push_back(*reports[i]);
        json p = to_json(*reports[i]);
        p["id"] = entries[i].id;
        p["cyan_level"] = entries[i].cyan_level;
        p["magenta_level"] = entries[i].magenta_level;
        patches.push_back(std::move(p));
    }
    const GrainReport mean = mean_grain_report(ok);
    row("mean", "", "", mean);

    json doc = {{"params", params_json(ctx)},
                {"model", to_json(model)},
                {"white_level", white ? json(*white) : json(nullptr)},
                {"patches", patches},
                {"mean", to_json(mean)},
                {"errors", errors_json(errors)}};
    io::write_text_atomic(ctx.g.out / "grain.csv", csv.str());
    io::write_text_atomic(ctx.g.out / "grain.json", dump(doc));
    return finish(errors);
}

// ---- synth-gt -------------------------------------------------------------

struct SynthArgs {
    std::string cyan_image;
    std::string magenta_image;
    std::optional<double> threshold;
    double cyan = -1.0;
    double magenta = -1.0;
};

int cmd_synth_gt(const Context& ctx, const SynthArgs& a) {
    const bool from_files = !a.cyan_image.empty() || !a.magenta_image.empty();
    const bool from_sim = a.cyan >= 0.0 || a.magenta >= 0.0;
    if (from_files == from_sim)
        throw UsageError("synth-gt needs either --cyan-image/--magenta-image or --cyan/--magenta levels");
    std::optional<RasterImage> cyan_img, magenta_img;
    json source;
    if (from_files) {
        if (a.cyan_image.empty() || a.magenta_image.empty())
            throw UsageError("--cyan-image and --magenta-image go together");
        cyan_img = io::read_png(a.cyan_image, ctx.g.dpi);
        magenta_img = io::read_png(a.magenta_image, ctx.g.dpi);
        source = {{"cyan_image", a.cyan_image}, {"magenta_image", a.magenta_image}};
    } else {
        SimConfig c, m;
        c.dpi = m.dpi = ctx.g.dpi;
        c.cyan_level = std::max(a.cyan, 0.0) / 100.0;
        m.magenta_level = std::max(a.magenta, 0.0) / 100.0;
        c.seed = ctx.cfg.segmentation.seed;
        m.seed = ctx.cfg.segmentation.seed + 1;
        try {
            c.validate();
            m.validate();
        } catch (const ParameterError& e) {
            throw UsageError(e.what());
        }
        cyan_img = simulate_patch(c).image;
        magenta_img = simulate_patch(m).image;
        io::write_png_rgb16(ctx.g.out / "cyan.png", *cyan_img);
        io::write_png_rgb16(ctx.g.out / "magenta.png", *magenta_img);
        source = {{"cyan", to_json(c)}, {"magenta", to_json(m)}};
    }
    const BinaryMask cyan_gt = ground_truth_from_single_color(*cyan_img, InkChannel::Red, a.threshold);
    const BinaryMask magenta_gt = ground_truth_from_single_color(*magenta_img, InkChannel::Green, a.threshold);
    const RasterImage composite = synthesize_superimposed(*cyan_img, *magenta_img);
    const LabelMap truth = fuse_channels(cyan_gt, magenta_gt);

    io::write_png_rgb16(ctx.g.out / "composite.png", composite);
    io::write_label_png(ctx.g.out / "composite_truth.png", truth, composite.dpi());
    io::write_mask_png(ctx.g.out / "cyan_mask.png", cyan_gt, composite.dpi());
    io::write_mask_png(ctx.g.out / "magenta_mask.png", magenta_gt, composite.dpi());

    const LabelMap pred = segment_patch(composite, ctx.cfg.segmentation);
    const double iou_c = iou(pred.cyan_mask(), cyan_gt);
    const double iou_m = iou(pred.magenta_mask(), magenta_gt);
    const ManifestEntry entry{"composite", 100.0 * static_cast<double>(cyan_gt.count()) / cyan_gt.size(),
                              100.0 * static_cast<double>(magenta_gt.count()) / magenta_gt.size(),
                              ctx.g.out / "composite.png", ctx.g.out / "composite_truth.png"};
    io::write_text_atomic(ctx.g.out / "synth_manifest.json", dump(manifest_to_json({entry}, ctx.g.out)));
    json doc = {{"params", params_json(ctx)},
                {"source", source},
                {"threshold", a.threshold ? json(*a.threshold) : json("otsu")},
                {"truth_coverage", to_json(coverage_ratios(truth))},
                {"segmentation_iou", {{"cyan", iou_c}, {"magenta", iou_m}}}};
    io::write_text_atomic(ctx.g.out / "synth_gt.json", dump(doc));
    std::cout << "cyan IoU " << num(iou_c) << ", magenta IoU " << num(iou_m) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Inkjet graininess analysis: segmentation, reflectance model, band-pass attribution"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--config", g.config_path, "analysis config JSON");
    app.add_option("--dpi", g.dpi, "resolution for simulation and for PNGs without pHYs")->capture_default_str();
    auto* seed_opt = app.add_option("--seed", g.seed, "seed for every random choice")->capture_default_str();
    app.add_option("--jobs", g.jobs, "patches processed in parallel")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--out", g.out, "output directory")->capture_default_str();

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "render simulated patches with label truth");
    simulate->add_option("--cyan", sim.cyan, "cyan level, percent")->check(CLI::Range(0.0, 100.0));
    simulate->add_option("--magenta", sim.magenta, "magenta level, percent")->check(CLI::Range(0.0, 100.0));
    simulate->add_option("--id", sim.id, "patch id");
    simulate->add_flag("--grid", sim.grid, "the 6x6 level grid with a manifest");
    simulate->add_option("--width-mm", sim.sim.patch_width_mm)->capture_default_str();
    simulate->add_option("--height-mm", sim.sim.patch_height_mm)->capture_default_str();
    simulate->add_option("--drop-um", sim.sim.drop_diameter_um)->capture_default_str();
    simulate->add_option("--diameter-cv", sim.sim.diameter_cv)->capture_default_str();
    simulate->add_option("--jitter-um", sim.sim.placement_jitter_um)->capture_default_str();
    simulate->add_option("--avoidance", sim.sim.avoidance)->capture_default_str();
    simulate->add_option("--noise", sim.sim.noise_sigma)->capture_default_str();

    std::string manifest;
    bool with_truth = false;
    auto* segment = app.add_subcommand("segment", "label every patch of a manifest");
    segment->add_option("--manifest", manifest)->required();
    segment->add_flag("--truth", with_truth, "score against each entry's truth_path");

    std::string labels_dir, pred, truth;
    auto* evaluate = app.add_subcommand("evaluate", "score label maps against truth");
    evaluate->add_option("--manifest", manifest);
    evaluate->add_option("--labels", labels_dir, "directory of <id>.png label maps (default <out>/labels)");
    evaluate->add_option("--pred", pred, "single predicted label PNG");
    evaluate->add_option("--truth", truth, "single truth label PNG");

    auto* fit = app.add_subcommand("fit-model", "fit component reflectances");
    fit->add_option("--manifest", manifest)->required();
    fit->add_option("--labels", labels_dir, "use stored label maps instead of segmenting");

    std::string model_path;
    auto* grain = app.add_subcommand("grain", "band-pass correlation of components with reflectance");
    grain->add_option("--manifest", manifest)->required();
    grain->add_option("--model", model_path)->required();
    grain->add_option("--labels", labels_dir, "use stored label maps instead of segmenting");

    SynthArgs synth;
    auto* synth_gt = app.add_subcommand("synth-gt", "composite from single-ink images, with fused truth");
    synth_gt->add_option("--cyan-image", synth.cyan_image);
    synth_gt->add_option("--magenta-image", synth.magenta_image);
    synth_gt->add_option("--cyan", synth.cyan, "simulate the cyan separation at this percent")->check(CLI::Range(0.0, 100.0));
    synth_gt->add_option("--magenta", synth.magenta, "simulate the magenta separation at this percent")
        ->check(CLI::Range(0.0, 100.0));
    synth_gt->add_option("--threshold", synth.threshold, "fixed channel threshold instead of Otsu");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }
    g.seed_given = seed_opt->count() > 0;

    auto optional_dir = [&]() -> std::optional<fs::path> {
        if (labels_dir.empty()) return std::nullopt;
        return fs::path(labels_dir);
    };

    try {
        const Context ctx = make_context(g);
        fs::create_directories(ctx.g.out);
        if (*simulate) return cmd_simulate(ctx, sim);
        if (*segment) return cmd_segment(ctx, manifest, with_truth);
        if (*evaluate) return cmd_evaluate(ctx, manifest, labels_dir, pred, truth);
        if (*fit) return cmd_fit_model(ctx, manifest, optional_dir());
        if (*grain) return cmd_grain(ctx, manifest, model_path, optional_dir());
        if (*synth_gt) return cmd_synth_gt(ctx, synth);
    } catch (const UsageError& e) {
        std::cerr << "inkgrain: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "inkgrain: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
