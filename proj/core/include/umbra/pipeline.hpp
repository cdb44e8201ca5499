#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "umbra/config.hpp"
#include "umbra/image.hpp"

namespace umbra {

struct RunResult {
    int requested = 0;
    int completed = 0;
    int failed = 0;
    std::vector<std::string> failures;
    std::filesystem::path manifest_path;

    double failure_rate() const {
        return requested > 0 ? static_cast<double>(failed) / requested : 0.0;
    }
};

/// Curated face corpus entry. Without a faces.json index every PNG in the
/// directory is used with a full-frame crop and assumed pre-curated; with
/// one, only entries marked shadow_free participate.
struct FaceEntry {
    std::filesystem::path file;
    std::optional<FaceCrop> crop;
};

std::vector<FaceEntry> load_face_corpus(const std::filesystem::path& dir);

/// Build a rig/scan pair from the config ("synthetic" or paths).
LightRig resolve_rig(const PipelineConfig& cfg);
OlatScan resolve_scan(const PipelineConfig& cfg, const LightRig& rig);

/// Batch generators. Each sample owns a counter-derived seed, runs
/// independently (worker pool), writes outputs via temp-file rename and
/// contributes one manifest row; a failing sample is logged and skipped
/// without aborting the run.
RunResult gen_foreign(const PipelineConfig& cfg);
RunResult gen_facial(const PipelineConfig& cfg);
RunResult gen_mirrors(const PipelineConfig& cfg);

/// Per-image and aggregate metrics for one prediction directory against
/// the ground-truth directory, matched by file stem. Missing predictions
/// are DataErrors naming the id.
struct MetricRow {
    std::string id;
    double psnr = 0.0;
    double ssim = 0.0;
    double l1 = 0.0;
};

struct MetricSummary {
    std::string name;
    std::vector<MetricRow> rows;
    double mean_psnr = 0.0;
    double mean_ssim = 0.0;
    double mean_l1 = 0.0;
};

MetricSummary compute_metrics(const std::filesystem::path& pred_dir,
                              const std::filesystem::path& truth_dir,
                              const std::string& name);

/// Fixed-width text table, one row per variant.
std::string render_metrics_table(const std::vector<MetricSummary>& summaries);

nlohmann::json metrics_report_json(const std::vector<MetricSummary>& summaries,
                                   bool include_rows = true);

}  // namespace umbra
