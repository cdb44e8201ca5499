// umbra: command-line front end for the portrait shadow synthesis toolkit.
//
// Exit codes: 0 success, 2 configuration error, 3 data error,
// 4 per-sample failure rate above the configured threshold.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "umbra/config.hpp"
#include "umbra/error.hpp"
#include "umbra/homography.hpp"
#include "umbra/image_io.hpp"
#include "umbra/landmarks.hpp"
#include "umbra/manifest.hpp"
#include "umbra/metrics.hpp"
#include "umbra/pipeline.hpp"
#include "umbra/symmetry.hpp"

namespace {

namespace fs = std::filesystem;
using namespace umbra;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitFailureRate = 4;

struct CommonOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> count;
    std::optional<int> workers;
    std::optional<std::string> out;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "Pipeline config file (key = value)");
    cmd->add_option("--seed", opts.seed, "Master seed");
    cmd->add_option("--count", opts.count, "Number of samples to generate");
    cmd->add_option("--workers", opts.workers, "Worker thread count");
    cmd->add_option("--out", opts.out, "Output root directory");
}

PipelineConfig resolve_config(const CommonOpts& opts) {
    PipelineConfig cfg = opts.config_path.empty()
                             ? PipelineConfig{}
                             : PipelineConfig::from_file(opts.config_path);
    if (opts.seed) cfg.master_seed = *opts.seed;
    if (opts.count) cfg.sample_count = *opts.count;
    if (opts.workers) cfg.workers = *opts.workers;
    if (opts.out) cfg.output_root = *opts.out;
    cfg.validate_common();
    return cfg;
}

int finish_run(const RunResult& result, const PipelineConfig& cfg) {
    std::printf("completed %d/%d samples (%d failed); manifest: %s\n", result.completed,
                result.requested, result.failed, result.manifest_path.string().c_str());
    if (result.failure_rate() > cfg.failure_rate_threshold) {
        std::fprintf(stderr, "failure rate %.3f exceeds threshold %.3f\n",
                     result.failure_rate(), cfg.failure_rate_threshold);
        return kExitFailureRate;
    }
    return kExitOk;
}

void save_by_extension(const fs::path& path, const ImageBuf& linear) {
    if (path.extension() == ".pfm") {
        save_pfm(path, linear);
    } else {
        save_png16(path, linear_to_srgb(linear));
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"umbra: deterministic portrait shadow dataset synthesis and evaluation"};
    app.require_subcommand(1);

    // synth-foreign
    CommonOpts foreign_opts;
    std::optional<std::string> faces_dir, silhouettes_dir, mask_source;
    bool no_sv = false, no_ss = false, no_color = false;
    auto* synth_foreign_cmd =
        app.add_subcommand("synth-foreign", "Composite foreign shadows onto face crops");
    add_common(synth_foreign_cmd, foreign_opts);
    synth_foreign_cmd->add_option("--faces", faces_dir, "Face corpus directory");
    synth_foreign_cmd->add_option("--silhouettes", silhouettes_dir,
                                  "Silhouette corpus directory");
    synth_foreign_cmd->add_option("--mask-source", mask_source,
                                  "both | perlin | silhouette");
    synth_foreign_cmd->add_flag("--no-sv", no_sv, "Skip spatially varying blur/intensity");
    synth_foreign_cmd->add_flag("--no-ss", no_ss, "Skip subsurface scattering blur");
    synth_foreign_cmd->add_flag("--no-color", no_color, "Fixed darkening, no color jitter");

    // synth-facial
    CommonOpts facial_opts;
    std::optional<std::string> rig_opt, scan_opt;
    auto* synth_facial_cmd =
        app.add_subcommand("synth-facial", "Render harsh/soft relighting pairs");
    add_common(synth_facial_cmd, facial_opts);
    synth_facial_cmd->add_option("--rig", rig_opt, "Rig JSON path, or 'synthetic'");
    synth_facial_cmd->add_option("--scan", scan_opt, "Scan directory, or 'synthetic'");

    // mirror
    CommonOpts mirror_opts;
    std::string mirror_image, mirror_landmarks, mirror_out, mirror_diff;
    std::optional<std::string> mirror_images_dir, mirror_landmarks_dir;
    auto* mirror_cmd = app.add_subcommand("mirror", "Facial-symmetry mirror warp");
    add_common(mirror_cmd, mirror_opts);
    mirror_cmd->add_option("--image", mirror_image, "Single input image");
    mirror_cmd->add_option("--landmarks", mirror_landmarks, "Landmark JSON for --image");
    mirror_cmd->add_option("--mirror-out", mirror_out, "Output path for the mirrored image");
    mirror_cmd->add_option("--diff", mirror_diff, "Optional |input - mirror| output path");
    mirror_cmd->add_option("--images-dir", mirror_images_dir, "Batch mode: image directory");
    mirror_cmd->add_option("--landmarks-dir", mirror_landmarks_dir,
                           "Batch mode: landmark directory");

    // relight
    std::string relight_rig = "synthetic", relight_scan = "synthetic", relight_out;
    std::string weights_path;
    std::optional<int> relight_key, relight_m;
    double relight_p_key = 1.0, relight_p_fill = 0.0;
    std::optional<double> relight_eps;
    CommonOpts relight_common;
    auto* relight_cmd = app.add_subcommand("relight", "Weighted OLAT recombination");
    relight_cmd->add_option("--config", relight_common.config_path, "Pipeline config file");
    relight_cmd->add_option("--rig", relight_rig, "Rig JSON path, or 'synthetic'");
    relight_cmd->add_option("--scan", relight_scan, "Scan directory, or 'synthetic'");
    relight_cmd->add_option("--out", relight_out, "Output image (.png or .pfm)")->required();
    relight_cmd->add_option("--weights", weights_path,
                            "JSON array of per-active-light weights");
    relight_cmd->add_option("--key", relight_key, "Key light index (harsh/soft modes)");
    relight_cmd->add_option("--p-key", relight_p_key, "Key intensity");
    relight_cmd->add_option("--m", relight_m, "Light size (soft mode)");
    relight_cmd->add_option("--p-fill", relight_p_fill, "Fill intensity (soft mode)");
    relight_cmd->add_option("--eps", relight_eps, "Ambient floor (default 0.005 * p_key)");

    // align
    std::string align_image, align_target, align_corr, align_out;
    std::vector<std::string> align_candidates, align_candidate_corrs;
    auto* align_cmd =
        app.add_subcommand("align", "Homography alignment / counterpart selection");
    align_cmd->add_option("--image", align_image, "Image to warp")->required();
    align_cmd->add_option("--target", align_target, "Alignment target image");
    align_cmd->add_option("--correspondences", align_corr,
                          "JSON [[x,y],[x',y']] pairs (pair mode)");
    align_cmd->add_option("--out", align_out, "Aligned output image");
    align_cmd->add_option("--candidate", align_candidates,
                          "Candidate image (repeat; selection mode)");
    align_cmd->add_option("--candidate-corr", align_candidate_corrs,
                          "Correspondence JSON per candidate (repeat)");

    // metrics
    std::string metrics_pred, metrics_truth, metrics_out;
    auto* metrics_cmd = app.add_subcommand("metrics", "PSNR/SSIM/L1 against ground truth");
    metrics_cmd->add_option("--pred", metrics_pred, "Prediction directory")->required();
    metrics_cmd->add_option("--truth", metrics_truth, "Ground-truth directory")->required();
    metrics_cmd->add_option("--out", metrics_out, "Report JSON path");

    // report
    std::string report_predictions, report_truth, report_out;
    CommonOpts report_common;
    auto* report_cmd =
        app.add_subcommand("report", "Aggregate metrics per variant subdirectory");
    report_cmd->add_option("--config", report_common.config_path, "Pipeline config file");
    report_cmd->add_option("--predictions", report_predictions,
                           "Root whose subdirectories are variants")
        ->required();
    report_cmd->add_option("--truth", report_truth, "Ground-truth directory")->required();
    report_cmd->add_option("--out", report_out, "Report JSON path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (synth_foreign_cmd->parsed()) {
            PipelineConfig cfg = resolve_config(foreign_opts);
            if (faces_dir) cfg.faces_dir = *faces_dir;
            if (silhouettes_dir) cfg.silhouettes_dir = *silhouettes_dir;
            if (mask_source) {
                if (*mask_source == "both") cfg.foreign.source_mode = MaskSourceMode::Both;
                else if (*mask_source == "perlin") cfg.foreign.source_mode = MaskSourceMode::PerlinOnly;
                else if (*mask_source == "silhouette") cfg.foreign.source_mode = MaskSourceMode::SilhouetteOnly;
                else throw ConfigError("--mask-source must be both, perlin or silhouette");
            }
            cfg.ablation.no_sv |= no_sv;
            cfg.ablation.no_ss |= no_ss;
            cfg.ablation.no_color |= no_color;
            if (cfg.faces_dir.empty())
                throw ConfigError("synth-foreign: --faces (or faces_dir) is required");
            return finish_run(gen_foreign(cfg), cfg);
        }

        if (synth_facial_cmd->parsed()) {
            PipelineConfig cfg = resolve_config(facial_opts);
            if (rig_opt) cfg.rig = *rig_opt;
            if (scan_opt) cfg.scan = *scan_opt;
            return finish_run(gen_facial(cfg), cfg);
        }

        if (mirror_cmd->parsed()) {
            if (!mirror_image.empty()) {
                if (mirror_landmarks.empty() || mirror_out.empty())
                    throw ConfigError("mirror: --image needs --landmarks and --mirror-out");
                const LandmarkSet landmarks = load_landmarks_json(mirror_landmarks);
                const ImageBuf img = srgb_to_linear(load_png(mirror_image));
                landmarks.validate_bounds(img.width(), img.height());
                const ImageBuf mirrored = mirror_warp(img, landmarks);
                save_by_extension(mirror_out, mirrored);
                if (!mirror_diff.empty()) {
                    const ImageBuf diff = mirror_difference(img, mirrored);
                    save_pfm(mirror_diff, diff);
                }
                return kExitOk;
            }
            PipelineConfig cfg = resolve_config(mirror_opts);
            if (mirror_images_dir) cfg.images_dir = *mirror_images_dir;
            if (mirror_landmarks_dir) cfg.landmarks_dir = *mirror_landmarks_dir;
            if (cfg.images_dir.empty() || cfg.landmarks_dir.empty())
                throw ConfigError("mirror: batch mode needs --images-dir and --landmarks-dir");
            return finish_run(gen_mirrors(cfg), cfg);
        }

        if (relight_cmd->parsed()) {
            PipelineConfig cfg = relight_common.config_path.empty()
                                     ? PipelineConfig{}
                                     : PipelineConfig::from_file(relight_common.config_path);
            cfg.rig = relight_rig;
            cfg.scan = relight_scan;
            const LightRig rig = resolve_rig(cfg);
            const OlatScan scan = resolve_scan(cfg, rig);

            WeightVector weights;
            if (!weights_path.empty()) {
                std::ifstream in(weights_path);
                if (!in) throw DataError("relight: cannot open " + weights_path);
                nlohmann::json doc;
                in >> doc;
                for (const auto& w : doc) weights.push_back(w.get<double>());
            } else if (relight_key) {
                const double eps = relight_eps.value_or(0.005 * relight_p_key);
                if (relight_m) {
                    weights = soft_weights(rig, *relight_key, relight_p_key, *relight_m,
                                           relight_p_fill, eps, cfg.facial.fill_neighborhood,
                                           cfg.facial.light_sizes);
                } else {
                    weights = harsh_weights(rig, *relight_key, relight_p_key, eps);
                }
            } else {
                throw ConfigError("relight: provide --weights or --key");
            }
            save_by_extension(relight_out, relight(scan, weights));
            return kExitOk;
        }

        if (align_cmd->parsed()) {
            const ImageBuf image = srgb_to_linear(load_png(align_image));
            if (!align_candidates.empty()) {
                if (align_candidate_corrs.size() != align_candidates.size())
                    throw ConfigError("align: one --candidate-corr per --candidate");
                std::vector<ImageBuf> candidates;
                std::vector<std::vector<Correspondence>> corrs;
                for (std::size_t i = 0; i < align_candidates.size(); ++i) {
                    candidates.push_back(srgb_to_linear(load_png(align_candidates[i])));
                    corrs.push_back(load_correspondences_json(align_candidate_corrs[i]));
                }
                const int chosen = select_counterpart(image, candidates, corrs);
                std::printf("selected candidate %d (%s)\n", chosen,
                            align_candidates[static_cast<std::size_t>(chosen)].c_str());
                return kExitOk;
            }
            if (align_corr.empty())
                throw ConfigError("align: pair mode needs --correspondences");
            const auto pairs = load_correspondences_json(align_corr);
            const DltResult dlt = dlt_homography(pairs);
            std::printf("reprojection rms: %.6f px\n", dlt.reprojection_rms);
            if (!align_out.empty()) {
                save_by_extension(align_out, warp_homography(image, dlt.homography));
            }
            if (!align_target.empty()) {
                const ImageBuf target = srgb_to_linear(load_png(align_target));
                const ImageBuf aligned = warp_homography(image, dlt.homography);
                std::printf("mean abs error vs target: %.6f\n", l1_pixel(aligned, target));
            }
            return kExitOk;
        }

        if (metrics_cmd->parsed()) {
            const MetricSummary summary =
                compute_metrics(metrics_pred, metrics_truth, "pred");
            std::fputs(render_metrics_table({summary}).c_str(), stdout);
            if (!metrics_out.empty()) {
                std::ofstream out(metrics_out);
                if (!out) throw DataError("metrics: cannot open " + metrics_out);
                out << metrics_report_json({summary}).dump(2) << "\n";
            }
            return kExitOk;
        }

        if (report_cmd->parsed()) {
            std::vector<fs::path> variants;
            for (const auto& e : fs::directory_iterator(report_predictions)) {
                if (e.is_directory()) variants.push_back(e.path());
            }
            std::sort(variants.begin(), variants.end());
            if (variants.empty())
                throw DataError("report: no variant subdirectories in " + report_predictions);
            std::vector<MetricSummary> summaries;
            for (const auto& v : variants) {
                summaries.push_back(
                    compute_metrics(v, report_truth, v.filename().string()));
            }
            std::fputs(render_metrics_table(summaries).c_str(), stdout);
            if (!report_out.empty()) {
                std::ofstream out(report_out);
                if (!out) throw DataError("report: cannot open " + report_out);
                out << metrics_report_json(summaries).dump(2) << "\n";
            }
            return kExitOk;
        }
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const DataError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return kExitData;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return kExitOk;
}
