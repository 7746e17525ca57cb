// riverbank - land/water change analysis toolkit.
//
// Single binary exposing the full pipeline: segment, diff, quantify,
// evaluate, loss, split, augment, pipeline, report. Exit codes: 0 success,
// 2 usage or I/O problem, 3 co-registration failure, 4 internal invariant
// violation.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "riverbank/change.hpp"
#include "riverbank/dataset.hpp"
#include "riverbank/image_io.hpp"
#include "riverbank/loss.hpp"
#include "riverbank/metrics.hpp"
#include "riverbank/morphology.hpp"
#include "riverbank/parallel.hpp"
#include "riverbank/plot.hpp"
#include "riverbank/quantify.hpp"
#include "riverbank/segment.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace riverbank;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitCoregistration = 3;
constexpr int kExitInternal = 4;

struct GlobalOpts {
    int threads = 1;
    std::uint64_t seed = 0;
    bool verbose = false;
};

void vlog(const GlobalOpts& g, const std::string& msg) {
    if (g.verbose) std::cerr << "[riverbank] " << msg << "\n";
}

// ---- shared option structs --------------------------------------------------

struct SegmentOpts {
    std::vector<std::string> images;
    std::string out_dir;
    std::string channel_mode = "blue_dominance";
    std::string channel = "b";
    double threshold = -1.0;  // <0 means otsu
    bool otsu = false;
    int refine_radius = 1;
    std::int64_t min_area = 500;
    int connectivity = 8;
    bool no_equalize = false;
};

SegmenterParams to_params(const SegmentOpts& o) {
    SegmenterParams p;
    if (o.channel_mode == "blue_dominance")
        p.channel_mode = ChannelMode::BlueDominance;
    else if (o.channel_mode == "ndwi_proxy")
        p.channel_mode = ChannelMode::NdwiProxy;
    else if (o.channel_mode == "single_channel")
        p.channel_mode = ChannelMode::SingleChannel;
    else
        throw CLI::ValidationError("--channel-mode",
                                   "expected blue_dominance, ndwi_proxy or single_channel");
    p.channel = o.channel == "r" ? 0 : o.channel == "g" ? 1 : 2;
    p.threshold_mode = o.threshold >= 0.0 ? ThresholdMode::Fixed : ThresholdMode::Otsu;
    p.fixed_threshold = o.threshold >= 0.0 ? o.threshold : 0.5;
    p.refine_radius = o.refine_radius;
    p.refine_min_area = o.min_area;
    p.connectivity = o.connectivity == 4 ? Connectivity::Four : Connectivity::Eight;
    p.validate();
    return p;
}

BinaryMask segment_image(const RgbImage& img, const SegmentOpts& opts) {
    const SegmenterParams params = to_params(opts);
    const RgbImage prepared = opts.no_equalize ? img : histogram_equalize(img);
    return refine_mask(color_channel_segment(prepared, params), params);
}

void add_segmenter_flags(CLI::App* cmd, SegmentOpts& o,
                         const std::string& min_area_flag = "--min-area",
                         bool with_connectivity = true) {
    cmd->add_option("--channel-mode", o.channel_mode,
                    "Water score: blue_dominance, ndwi_proxy or single_channel")
        ->capture_default_str();
    cmd->add_option("--channel", o.channel, "Channel for single_channel mode (r, g or b)")
        ->check(CLI::IsMember({"r", "g", "b"}))
        ->capture_default_str();
    cmd->add_option("--threshold", o.threshold,
                    "Fixed water-score threshold in [0,1]; omit to use Otsu");
    cmd->add_flag("--otsu", o.otsu, "Select the threshold with Otsu's method (default)");
    cmd->add_option("--refine-radius", o.refine_radius,
                    "Morphological close+open radius, 0 disables")
        ->capture_default_str();
    cmd->add_option(min_area_flag, o.min_area,
                    "Minimum mask component area in px, 0 disables")
        ->capture_default_str();
    if (with_connectivity)
        cmd->add_option("--connectivity", o.connectivity, "Component connectivity (4 or 8)")
            ->check(CLI::IsMember({4, 8}))
            ->capture_default_str();
    cmd->add_flag("--no-equalize", o.no_equalize,
                  "Skip per-channel histogram equalization before scoring");
}

// ---- segment ----------------------------------------------------------------

int run_segment(const GlobalOpts& g, const SegmentOpts& opts) {
    if (opts.images.empty()) throw CLI::ValidationError("segment", "no input images given");
    fs::create_directories(opts.out_dir);

    struct Row {
        std::string input, mask;
        double land_fraction = 0.0;
        std::int64_t component_count = 0;
    };
    std::vector<Row> rows(opts.images.size());

    parallel_for(static_cast<std::int64_t>(opts.images.size()), g.threads, [&](std::int64_t i) {
        const std::string& path = opts.images[static_cast<std::size_t>(i)];
        const RgbImage img = read_rgb(path);
        const BinaryMask mask = segment_image(img, opts);
        const std::string out =
            (fs::path(opts.out_dir) / (fs::path(path).stem().string() + "_mask.png")).string();
        write_mask(out, mask);
        Row& r = rows[static_cast<std::size_t>(i)];
        r.input = path;
        r.mask = out;
        r.land_fraction = land_fraction(mask);
        r.component_count = static_cast<std::int64_t>(
            connected_components(mask, to_params(opts).connectivity).components.size());
    });

    json summary;
    summary["schema_version"] = 1;
    summary["results"] = json::array();
    for (const Row& r : rows)
        summary["results"].push_back({{"input", r.input},
                                      {"mask", r.mask},
                                      {"land_fraction", r.land_fraction},
                                      {"component_count", r.component_count}});
    const std::string summary_path = (fs::path(opts.out_dir) / "summary.json").string();
    std::ofstream f(summary_path, std::ios::binary);
    if (!f) throw IoError("cannot open for writing: " + summary_path);
    f << summary.dump(2) << "\n";
    vlog(g, "wrote " + summary_path);
    return kExitOk;
}

// ---- diff -------------------------------------------------------------------

struct DiffOpts {
    std::string t1, t2;
    std::int64_t min_area = 500;
    int connectivity = 8;
    bool pre_filter_masks = false;
    std::string out_map, out_stats;
    double resolution_m = 10.0;
    std::string geo;  // optional sidecar, overrides resolution
};

int run_diff(const GlobalOpts& g, const DiffOpts& o) {
    BinaryMask m1 = read_mask(o.t1);
    BinaryMask m2 = read_mask(o.t2);
    const Connectivity conn = o.connectivity == 4 ? Connectivity::Four : Connectivity::Eight;

    if (o.pre_filter_masks && o.min_area > 0) {
        m1 = filter_min_area(m1, o.min_area, conn);
        m2 = filter_min_area(m2, o.min_area, conn);
    }
    ChangeMap cm = classify_change(m1, m2);
    if (!o.pre_filter_masks && o.min_area > 0) cm = filter_change(cm, o.min_area, conn);

    if (!o.out_map.empty()) {
        write_rgb(o.out_map, render_change_map(cm));
        vlog(g, "wrote " + o.out_map);
    }
    if (!o.out_stats.empty()) {
        GeoMeta geo;
        geo.resolution_m = o.resolution_m;
        if (!o.geo.empty()) geo = read_geo_sidecar(o.geo);
        write_areas_csv(o.out_stats, quantify(cm, geo));
        vlog(g, "wrote " + o.out_stats);
    }
    return kExitOk;
}

// ---- quantify ---------------------------------------------------------------

struct QuantifyOpts {
    std::string map, geo, out;
    bool rate = false;
    std::string t1, t2;
};

int run_quantify(const GlobalOpts& g, const QuantifyOpts& o) {
    const ChangeMap cm = parse_change_map(read_rgb(o.map));
    const GeoMeta geo = read_geo_sidecar(o.geo);
    const ChangeAreas areas = quantify(cm, geo);
    write_areas_csv(o.out, areas);
    vlog(g, "wrote " + o.out);

    if (o.rate) {
        if (o.t1.empty() || o.t2.empty())
            throw CLI::ValidationError("--rate", "requires --t1 and --t2 dates");
        const ChangeRates r = annual_rate(areas, parse_iso_date(o.t1), parse_iso_date(o.t2));
        std::printf("interval_years,%.6f\n", r.years);
        std::printf("erosion_km2_per_yr,%.6f\n", r.erosion_km2_per_yr);
        std::printf("accretion_km2_per_yr,%.6f\n", r.accretion_km2_per_yr);
        std::printf("net_km2_per_yr,%.6f\n", r.net_km2_per_yr);
    }
    return kExitOk;
}

// ---- evaluate ---------------------------------------------------------------

struct EvaluateOpts {
    std::string pred_dir, gt_dir, out;
    std::string positive = "water";
    int boundary_band_px = 2;
};

int run_evaluate(const GlobalOpts& g, const EvaluateOpts& o) {
    const PositiveClass pos =
        o.positive == "land" ? PositiveClass::Land : PositiveClass::Water;

    std::vector<std::string> names;
    for (const auto& e : fs::directory_iterator(o.pred_dir)) {
        if (!e.is_regular_file()) continue;
        const std::string ext = e.path().extension().string();
        if (ext != ".png" && ext != ".pgm") continue;
        const std::string name = e.path().filename().string();
        if (fs::exists(fs::path(o.gt_dir) / name)) names.push_back(name);
    }
    std::sort(names.begin(), names.end());
    if (names.empty())
        throw IoError("no common mask files between " + o.pred_dir + " and " + o.gt_dir);

    struct Row {
        MetricsReport rep;
        ConfusionCounts counts;
        std::int64_t band_inter = 0, band_union = 0;
    };
    std::vector<Row> rows(names.size());

    parallel_for(static_cast<std::int64_t>(names.size()), g.threads, [&](std::int64_t i) {
        const std::string& name = names[static_cast<std::size_t>(i)];
        const BinaryMask pred = read_mask((fs::path(o.pred_dir) / name).string());
        const BinaryMask gt = read_mask((fs::path(o.gt_dir) / name).string());
        Row& r = rows[static_cast<std::size_t>(i)];
        r.counts = confusion(pred, gt, pos);
        r.rep = metrics(r.counts);
        r.rep.boundary_iou = boundary_iou(pred, gt, o.boundary_band_px);
        const BinaryMask bp = boundary_band(pred, o.boundary_band_px);
        const BinaryMask bg = boundary_band(gt, o.boundary_band_px);
        for (std::size_t k = 0; k < bp.size(); ++k) {
            r.band_inter += bp.data[k] & bg.data[k];
            r.band_union += bp.data[k] | bg.data[k];
        }
    });

    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw IoError("cannot open for writing: " + o.out);
    f << "file,iou,f1,precision,recall,pixel_accuracy,boundary_iou\n";
    char buf[256];
    const auto emit = [&](const std::string& name, const MetricsReport& r) {
        std::snprintf(buf, sizeof(buf), "%s,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n", name.c_str(),
                      r.iou, r.f1, r.precision, r.recall, r.pixel_accuracy, r.boundary_iou);
        f << buf;
    };
    MetricsReport mean{};
    ConfusionCounts pooled{};
    std::int64_t pb_inter = 0, pb_union = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        emit(names[i], rows[i].rep);
        mean.iou += rows[i].rep.iou;
        mean.f1 += rows[i].rep.f1;
        mean.precision += rows[i].rep.precision;
        mean.recall += rows[i].rep.recall;
        mean.pixel_accuracy += rows[i].rep.pixel_accuracy;
        mean.boundary_iou += rows[i].rep.boundary_iou;
        pooled += rows[i].counts;
        pb_inter += rows[i].band_inter;
        pb_union += rows[i].band_union;
    }
    const double n = static_cast<double>(rows.size());
    mean.iou /= n;
    mean.f1 /= n;
    mean.precision /= n;
    mean.recall /= n;
    mean.pixel_accuracy /= n;
    mean.boundary_iou /= n;
    emit("mean", mean);

    MetricsReport pooled_rep = metrics(pooled);
    pooled_rep.boundary_iou =
        pb_union == 0 ? 1.0 : static_cast<double>(pb_inter) / static_cast<double>(pb_union);
    emit("pooled", pooled_rep);
    vlog(g, "wrote " + o.out);
    return kExitOk;
}

// ---- loss -------------------------------------------------------------------

struct LossOpts {
    std::string prob, gt;
    double lambda_focal = 20.0, lambda_dice = 1.0, lambda_iou = 1.0;
    double alpha = 0.25, gamma = 2.0;
    bool alpha_balanced = false;
    bool check_grad = false;
    double grad_step = 1e-5;
    double grad_tol = 1e-4;
};

int run_loss(const GlobalOpts&, const LossOpts& o) {
    const ProbMap p = read_prob_map(o.prob);
    const BinaryMask y = read_mask(o.gt);
    LossParams params;
    params.lambda_focal = o.lambda_focal;
    params.lambda_dice = o.lambda_dice;
    params.lambda_iou = o.lambda_iou;
    params.alpha = o.alpha;
    params.gamma = o.gamma;
    params.alpha_balanced = o.alpha_balanced;
    params.validate();

    const LossResult focal = focal_loss(p, y, params);
    const LossResult dice = dice_loss(p, y);
    const LossResult iou = iou_loss(p, y);
    const LossResult total = total_loss(p, y, params);

    std::printf("focal,%.6f\n", focal.value);
    std::printf("dice_soft,%.6f\n", dice.value);
    std::printf("iou_soft,%.6f\n", iou.value);
    std::printf("dice_hard_0.5,%.6f\n", dice_loss_hard(p, y));
    std::printf("iou_hard_0.5,%.6f\n", iou_loss_hard(p, y));
    std::printf("total,%.6f\n", total.value);
    if (focal.clamped_px > 0) std::printf("clamped_px,%d\n", focal.clamped_px);

    if (o.check_grad) {
        const std::pair<const char*, LossFn> checks[] = {
            {"focal",
             [](const ProbMap& pp, const BinaryMask& yy, const LossParams& lp) {
                 return focal_loss(pp, yy, lp);
             }},
            {"dice",
             [](const ProbMap& pp, const BinaryMask& yy, const LossParams&) {
                 return dice_loss(pp, yy);
             }},
            {"iou",
             [](const ProbMap& pp, const BinaryMask& yy, const LossParams&) {
                 return iou_loss(pp, yy);
             }},
            {"total",
             [](const ProbMap& pp, const BinaryMask& yy, const LossParams& lp) {
                 return total_loss(pp, yy, lp);
             }},
        };
        bool ok = true;
        for (const auto& [name, fn] : checks) {
            const double err = check_gradient(fn, p, y, params, o.grad_step);
            std::printf("grad_check_%s,%.3e\n", name, err);
            ok = ok && err < o.grad_tol;
        }
        if (!ok) {
            std::fprintf(stderr, "gradient check exceeded tolerance %.1e\n", o.grad_tol);
            return kExitInternal;
        }
    }
    return kExitOk;
}

// ---- split ------------------------------------------------------------------

struct SplitOpts {
    std::string manifest;
    std::int64_t train = 0, val = 0, test = 0;
    bool allow_site_year_overlap = false;
    std::string out;  // empty -> rewrite in place
};

int run_split(const GlobalOpts& g, const SplitOpts& o) {
    const auto entries = read_manifest(o.manifest);
    const auto split = split_manifest(entries, SplitCounts{o.train, o.val, o.test}, g.seed,
                                      o.allow_site_year_overlap);
    const std::string out = o.out.empty() ? o.manifest : o.out;
    write_manifest(out, split);
    vlog(g, "wrote " + out);
    return kExitOk;
}

// ---- augment ----------------------------------------------------------------

struct AugmentOpts {
    std::string manifest, spec, out_dir;
    int per_image = 1;
    bool include_all_splits = false;
};

int run_augment(const GlobalOpts& g, const AugmentOpts& o) {
    const AugmentationSpec spec = augmentation_spec_from_toml(load_toml(o.spec));
    const std::uint64_t seed = g.seed != 0 ? g.seed : spec.seed;
    std::vector<ManifestEntry> entries;
    for (ManifestEntry& e : read_manifest(o.manifest)) {
        // Augmentation is a training-set affair; val/test stay untouched.
        if (o.include_all_splits || e.split == Split::Train) entries.push_back(std::move(e));
    }
    if (entries.empty())
        throw EmptyInput("no train-split entries in " + o.manifest +
                         " (use --all-splits to override)");
    fs::create_directories(o.out_dir);

    std::vector<std::vector<ManifestEntry>> produced(entries.size());
    parallel_for(static_cast<std::int64_t>(entries.size()), g.threads, [&](std::int64_t i) {
        const ManifestEntry& e = entries[static_cast<std::size_t>(i)];
        const RgbImage img = read_rgb(e.image_path);
        const BinaryMask mask = read_mask(e.mask_path);
        if (img.width != mask.width || img.height != mask.height)
            throw DimensionMismatch(e.scene_id + ": image and mask dimensions differ");
        for (int k = 0; k < o.per_image; ++k) {
            DrawState draw =
                DrawState::for_scene(seed, e.scene_id, static_cast<std::uint64_t>(k));
            const auto [ai, am] = augment_pair(img, mask, spec, draw);
            ManifestEntry out = e;
            out.scene_id = e.scene_id + "_aug" + std::to_string(k);
            out.image_path = (fs::path(o.out_dir) / (out.scene_id + ".png")).string();
            out.mask_path = (fs::path(o.out_dir) / (out.scene_id + "_mask.png")).string();
            write_rgb(out.image_path, ai);
            write_mask(out.mask_path, am);
            produced[static_cast<std::size_t>(i)].push_back(std::move(out));
        }
    });

    std::vector<ManifestEntry> flat;
    for (auto& v : produced)
        for (auto& e : v) flat.push_back(std::move(e));
    const std::string out_manifest = (fs::path(o.out_dir) / "augmented.jsonl").string();
    write_manifest(out_manifest, flat);
    vlog(g, "wrote " + out_manifest);
    return kExitOk;
}

// ---- pipeline ---------------------------------------------------------------

struct PipelineOpts {
    std::string t1_image, t2_image;
    std::string t1_mask, t2_mask;
    std::string t1_geo, t2_geo;
    std::string out_dir;
    double coreg_tolerance = 0.01;
    bool force = false;
    std::int64_t min_area = 500;
    int connectivity = 8;
    bool pre_filter_masks = false;
    SegmentOpts seg;  // segmenter flags shared with `segment`
};

json areas_to_json(const ChangeAreas& a) {
    return json{{"erosion_px", a.erosion_px},
                {"accretion_px", a.accretion_px},
                {"stable_land_px", a.stable_land_px},
                {"stable_water_px", a.stable_water_px},
                {"stable_px", a.stable_px},
                {"erosion_km2", a.erosion_km2},
                {"accretion_km2", a.accretion_km2},
                {"stable_land_km2", a.stable_land_km2},
                {"stable_water_km2", a.stable_water_km2},
                {"stable_km2", a.stable_km2},
                {"net_change_km2", a.net_change_km2},
                {"resolution_m", a.resolution_m},
                {"uncertainty_fraction", a.uncertainty_fraction},
                {"uncertainty_extrapolated", a.uncertainty_extrapolated}};
}

int run_pipeline(const GlobalOpts& g, const PipelineOpts& o) {
    const GeoMeta geo1 = read_geo_sidecar(o.t1_geo);
    const GeoMeta geo2 = read_geo_sidecar(o.t2_geo);
    fs::create_directories(o.out_dir);

    const bool masks_given = !o.t1_mask.empty() || !o.t2_mask.empty();
    if (masks_given && (o.t1_mask.empty() || o.t2_mask.empty()))
        throw CLI::ValidationError("pipeline", "--t1-mask and --t2-mask must come together");

    BinaryMask m1, m2;
    json inputs;
    if (masks_given) {
        m1 = read_mask(o.t1_mask);
        m2 = read_mask(o.t2_mask);
        inputs = {{"t1_mask", o.t1_mask}, {"t2_mask", o.t2_mask}};
    } else {
        if (o.t1_image.empty() || o.t2_image.empty())
            throw CLI::ValidationError("pipeline",
                                       "need --t1-image/--t2-image or --t1-mask/--t2-mask");
        SegmentOpts seg = o.seg;
        seg.connectivity = o.connectivity;
        m1 = segment_image(read_rgb(o.t1_image), seg);
        m2 = segment_image(read_rgb(o.t2_image), seg);
        write_mask((fs::path(o.out_dir) / "t1_mask.png").string(), m1);
        write_mask((fs::path(o.out_dir) / "t2_mask.png").string(), m2);
        inputs = {{"t1_image", o.t1_image}, {"t2_image", o.t2_image}};
    }

    const CoregistrationReport coreg =
        check_coregistration(m1, geo1, m2, geo2, o.coreg_tolerance);
    if (!coreg.ok() && !o.force) {
        std::fprintf(stderr,
                     "co-registration check failed: dims_match=%s resolution_match=%s "
                     "geo_offset_m=%.2f (use --force to continue)\n",
                     coreg.dims_match ? "true" : "false",
                     coreg.resolution_match ? "true" : "false", coreg.geo_offset_m);
        return kExitCoregistration;
    }

    const Connectivity conn = o.connectivity == 4 ? Connectivity::Four : Connectivity::Eight;
    if (o.pre_filter_masks && o.min_area > 0) {
        m1 = filter_min_area(m1, o.min_area, conn);
        m2 = filter_min_area(m2, o.min_area, conn);
    }
    ChangeMap cm = classify_change(m1, m2);
    if (!o.pre_filter_masks && o.min_area > 0) cm = filter_change(cm, o.min_area, conn);

    const ChangeAreas areas = quantify(cm, geo1);
    write_rgb((fs::path(o.out_dir) / "change_map.png").string(), render_change_map(cm));
    write_areas_csv((fs::path(o.out_dir) / "areas.csv").string(), areas);

    json report;
    report["schema_version"] = 1;
    report["inputs"] = inputs;
    report["coregistration"] = {{"dims_match", coreg.dims_match},
                                {"resolution_match", coreg.resolution_match},
                                {"geo_offset_m", coreg.geo_offset_m},
                                {"tolerance", o.coreg_tolerance},
                                {"forced", o.force && !coreg.ok()}};
    report["parameters"] = {{"min_area_px", o.min_area},
                            {"connectivity", o.connectivity},
                            {"pre_filter_masks", o.pre_filter_masks}};
    report["areas"] = areas_to_json(areas);
    report["dates"] = {{"t1", format_iso_date(geo1.capture_date)},
                       {"t2", format_iso_date(geo2.capture_date)}};
    if (days_between(geo1.capture_date, geo2.capture_date) >= 1) {
        const ChangeRates r = annual_rate(areas, geo1.capture_date, geo2.capture_date);
        report["rates"] = {{"interval_years", r.years},
                           {"erosion_km2_per_yr", r.erosion_km2_per_yr},
                           {"accretion_km2_per_yr", r.accretion_km2_per_yr},
                           {"net_km2_per_yr", r.net_km2_per_yr}};
    }

    const std::string report_path = (fs::path(o.out_dir) / "report.json").string();
    std::ofstream f(report_path, std::ios::binary);
    if (!f) throw IoError("cannot open for writing: " + report_path);
    f << report.dump(2) << "\n";
    vlog(g, "wrote " + report_path);
    return kExitOk;
}

// ---- report -----------------------------------------------------------------

struct ReportOpts {
    std::vector<std::string> csvs;
    std::string out;
    std::string plot;
};

int run_report(const GlobalOpts& g, const ReportOpts& o) {
    if (o.csvs.empty()) throw CLI::ValidationError("report", "no input CSVs given");

    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw IoError("cannot open for writing: " + o.out);
    f << "epoch,file,erosion_km2,accretion_km2,net_km2,"
         "cum_erosion_km2,cum_accretion_km2,cum_net_km2\n";

    PlotSeries erosion{"erosion", {}, kErosionColor};
    PlotSeries accretion{"accretion", {}, kAccretionColor};
    PlotSeries net{"net", {}, {40, 80, 200}};
    double cum_e = 0.0, cum_a = 0.0, cum_n = 0.0;
    char buf[256];
    for (std::size_t i = 0; i < o.csvs.size(); ++i) {
        const AreasCsvRow row = read_areas_csv(o.csvs[i]);
        cum_e += row.erosion_km2;
        cum_a += row.accretion_km2;
        cum_n += row.net_km2;
        erosion.values.push_back(row.erosion_km2);
        accretion.values.push_back(row.accretion_km2);
        net.values.push_back(row.net_km2);
        std::snprintf(buf, sizeof(buf), "%zu,%s,%.3f,%.3f,%.3f,%.3f,%.3f,%.3f\n", i + 1,
                      fs::path(o.csvs[i]).filename().string().c_str(), row.erosion_km2,
                      row.accretion_km2, row.net_km2, cum_e, cum_a, cum_n);
        f << buf;
    }
    if (!o.plot.empty()) {
        write_rgb(o.plot, render_series_plot({erosion, accretion, net}));
        vlog(g, "wrote " + o.plot);
    }
    vlog(g, "wrote " + o.out);
    return kExitOk;
}

// ---- manual -----------------------------------------------------------------

void print_manual(const CLI::App& app) {
    std::cout << "RIVERBANK(1)\n\nNAME\n    riverbank - land/water change analysis toolkit\n\n";
    std::cout << "SYNOPSIS\n    riverbank [global flags] <subcommand> [flags]\n\n";
    std::cout << "GLOBAL\n" << app.help("", CLI::AppFormatMode::Normal) << "\n";
    for (const CLI::App* sub :
         const_cast<CLI::App&>(app).get_subcommands([](const CLI::App*) { return true; })) {
        std::cout << "--------\n" << sub->help("", CLI::AppFormatMode::All) << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"riverbank - land/water change analysis toolkit"};
    app.require_subcommand(0, 1);
    app.fallthrough();
    app.set_config("--config", "", "TOML config file (defaults < file < flags)");

    GlobalOpts g;
    app.add_option("--threads", g.threads, "Worker threads for batch stages")
        ->envname("RIVERBANK_THREADS")
        ->capture_default_str();
    app.add_option("--seed", g.seed, "Seed for all randomized stages")->capture_default_str();
    app.add_flag("--verbose", g.verbose, "Chatty progress output on stderr");
    bool manual = false;
    app.add_flag("--manual", manual, "Print the full generated manual and exit");

    SegmentOpts seg;
    CLI::App* c_segment = app.add_subcommand("segment", "Rough color-channel land/water masks");
    c_segment->add_option("images", seg.images, "Input RGB rasters (.png/.ppm)");
    c_segment->add_option("--out-dir", seg.out_dir, "Output directory")->required();
    add_segmenter_flags(c_segment, seg);

    DiffOpts diff;
    CLI::App* c_diff = app.add_subcommand("diff", "Classify change between two land masks");
    c_diff->add_option("--t1", diff.t1, "Land mask at the earlier date")->required();
    c_diff->add_option("--t2", diff.t2, "Land mask at the later date")->required();
    c_diff->add_option("--min-area", diff.min_area, "Minimum change-component area in px")
        ->capture_default_str();
    c_diff->add_option("--connectivity", diff.connectivity, "4 or 8")
        ->check(CLI::IsMember({4, 8}))
        ->capture_default_str();
    c_diff->add_flag("--pre-filter-masks", diff.pre_filter_masks,
                     "Area-filter the input masks instead of the change components");
    c_diff->add_option("--out-map", diff.out_map, "Rendered change map (.png/.ppm)");
    c_diff->add_option("--out-stats", diff.out_stats, "Area statistics CSV");
    c_diff->add_option("--resolution-m", diff.resolution_m,
                       "Meters per pixel for the stats CSV")
        ->capture_default_str();
    c_diff->add_option("--geo", diff.geo, "Geo sidecar JSON (overrides --resolution-m)");

    QuantifyOpts quant;
    CLI::App* c_quantify =
        app.add_subcommand("quantify", "Convert a rendered change map into areas");
    c_quantify->add_option("--map", quant.map, "Change map produced by diff/pipeline")
        ->required();
    c_quantify->add_option("--geo", quant.geo, "Geo sidecar JSON")->required();
    c_quantify->add_option("--out", quant.out, "Output CSV")->required();
    c_quantify->add_flag("--rate", quant.rate, "Also print annual rates (needs --t1/--t2)");
    c_quantify->add_option("--t1", quant.t1, "Earlier date, YYYY-MM-DD");
    c_quantify->add_option("--t2", quant.t2, "Later date, YYYY-MM-DD");

    EvaluateOpts eval;
    CLI::App* c_evaluate =
        app.add_subcommand("evaluate", "Score predicted masks against ground truth");
    c_evaluate->add_option("--pred-dir", eval.pred_dir, "Directory of predicted masks")
        ->required();
    c_evaluate->add_option("--gt-dir", eval.gt_dir, "Directory of ground-truth masks")
        ->required();
    c_evaluate->add_option("--positive", eval.positive, "Positive class: land or water")
        ->check(CLI::IsMember({"land", "water"}))
        ->capture_default_str();
    c_evaluate->add_option("--boundary-band", eval.boundary_band_px,
                           "Boundary band width in px (Chebyshev)")
        ->capture_default_str();
    c_evaluate->add_option("--out", eval.out, "Output CSV")->required();

    LossOpts loss;
    CLI::App* c_loss =
        app.add_subcommand("loss", "Hybrid focal/dice/iou loss values on a probability map");
    c_loss->add_option("--prob", loss.prob, "Probability raster (.pfm)")->required();
    c_loss->add_option("--gt", loss.gt, "Ground-truth mask")->required();
    c_loss->add_option("--lambda-focal", loss.lambda_focal, "Focal weight")
        ->capture_default_str();
    c_loss->add_option("--lambda-dice", loss.lambda_dice, "Dice weight")
        ->capture_default_str();
    c_loss->add_option("--lambda-iou", loss.lambda_iou, "IoU weight")->capture_default_str();
    c_loss->add_option("--alpha", loss.alpha, "Focal alpha")->capture_default_str();
    c_loss->add_option("--gamma", loss.gamma, "Focal gamma")->capture_default_str();
    c_loss->add_flag("--focal-alpha-balanced", loss.alpha_balanced,
                     "Use alpha for positives and 1-alpha for negatives");
    c_loss->add_flag("--check-grad", loss.check_grad,
                     "Verify analytic gradients against central differences");
    c_loss->add_option("--grad-step", loss.grad_step, "Finite-difference step")
        ->capture_default_str();
    c_loss->add_option("--grad-tol", loss.grad_tol, "Max relative error accepted")
        ->capture_default_str();

    SplitOpts split;
    CLI::App* c_split =
        app.add_subcommand("split", "Stratified train/val/test assignment for a manifest");
    c_split->add_option("--manifest", split.manifest, "JSON-lines manifest")->required();
    c_split->add_option("--train", split.train, "Train count")->required();
    c_split->add_option("--val", split.val, "Validation count")->required();
    c_split->add_option("--test", split.test, "Test count")->required();
    c_split->add_flag("--allow-site-year-overlap", split.allow_site_year_overlap,
                      "Permit one site-year to span multiple splits");
    c_split->add_option("--out", split.out, "Output manifest (default: rewrite in place)");

    AugmentOpts aug;
    CLI::App* c_augment =
        app.add_subcommand("augment", "Paired image/mask augmentation for train entries");
    c_augment->add_option("--manifest", aug.manifest, "JSON-lines manifest")->required();
    c_augment->add_option("--spec", aug.spec, "Augmentation spec TOML")->required();
    c_augment->add_option("--out-dir", aug.out_dir, "Output directory")->required();
    c_augment->add_option("--per-image", aug.per_image, "Augmented copies per scene")
        ->capture_default_str();
    c_augment->add_flag("--all-splits", aug.include_all_splits,
                        "Augment every entry, not only the train split");

    PipelineOpts pipe;
    CLI::App* c_pipeline = app.add_subcommand(
        "pipeline", "segment -> diff -> quantify -> render for one scene pair");
    c_pipeline->add_option("--t1-image", pipe.t1_image, "RGB raster at the earlier date");
    c_pipeline->add_option("--t2-image", pipe.t2_image, "RGB raster at the later date");
    c_pipeline->add_option("--t1-mask", pipe.t1_mask, "Precomputed land mask at t1");
    c_pipeline->add_option("--t2-mask", pipe.t2_mask, "Precomputed land mask at t2");
    c_pipeline->add_option("--t1-geo", pipe.t1_geo, "Geo sidecar JSON at t1")->required();
    c_pipeline->add_option("--t2-geo", pipe.t2_geo, "Geo sidecar JSON at t2")->required();
    c_pipeline->add_option("--out-dir", pipe.out_dir, "Output directory")->required();
    c_pipeline->add_option("--coreg-tolerance", pipe.coreg_tolerance,
                           "Relative resolution tolerance")
        ->capture_default_str();
    c_pipeline->add_flag("--force", pipe.force, "Continue despite a failed co-registration");
    c_pipeline->add_option("--min-area", pipe.min_area, "Minimum change-component area in px")
        ->capture_default_str();
    c_pipeline->add_option("--connectivity", pipe.connectivity, "4 or 8")
        ->check(CLI::IsMember({4, 8}))
        ->capture_default_str();
    c_pipeline->add_flag("--pre-filter-masks", pipe.pre_filter_masks,
                         "Area-filter the masks instead of the change components");
    add_segmenter_flags(c_pipeline, pipe.seg, "--seg-min-area", false);

    ReportOpts rep;
    CLI::App* c_report =
        app.add_subcommand("report", "Aggregate per-epoch change CSVs and plot the series");
    c_report->add_option("csvs", rep.csvs, "Per-epoch areas.csv files, in time order");
    c_report->add_option("--out", rep.out, "Aggregate CSV")->required();
    c_report->add_option("--plot", rep.plot, "Time-series plot image (.png/.ppm)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (manual) {
        print_manual(app);
        return kExitOk;
    }
    if (app.get_subcommands().empty()) {
        std::cout << app.help();
        return kExitUsage;
    }

    try {
        if (c_segment->parsed()) return run_segment(g, seg);
        if (c_diff->parsed()) return run_diff(g, diff);
        if (c_quantify->parsed()) return run_quantify(g, quant);
        if (c_evaluate->parsed()) return run_evaluate(g, eval);
        if (c_loss->parsed()) return run_loss(g, loss);
        if (c_split->parsed()) return run_split(g, split);
        if (c_augment->parsed()) return run_augment(g, aug);
        if (c_pipeline->parsed()) return run_pipeline(g, pipe);
        if (c_report->parsed()) return run_report(g, rep);
    } catch (const CLI::ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const CoregistrationFailure& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitCoregistration;
    } catch (const DimensionMismatch& e) {
        // Misaligned inputs at the CLI surface are a co-registration problem.
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitCoregistration;
    } catch (const IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const SchemaMismatch& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const EmptyInput& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const InsufficientEntries& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const MissingStratumField& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const SiteYearOverlap& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const NonPositiveResolution& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const NonPositiveInterval& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const Error& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return kExitInternal;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return kExitInternal;
    }
    return kExitOk;
}
