#include "umbra/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>
#include <thread>

#include "umbra/error.hpp"
#include "umbra/image_io.hpp"
#include "umbra/landmarks.hpp"
#include "umbra/manifest.hpp"
#include "umbra/metrics.hpp"
#include "umbra/rng.hpp"
#include "umbra/symmetry.hpp"

namespace umbra {

namespace {

namespace fs = std::filesystem;

std::string sample_name(int id) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%06d", id);
    return buf;
}

/// Write-then-rename so partially written files never land under their
/// final name.
void atomic_save_png16(const fs::path& final_path, const ImageBuf& encoded) {
    const fs::path tmp = final_path.string() + ".tmp";
    save_png16(tmp, encoded);
    fs::rename(tmp, final_path);
}

void atomic_save_pfm(const fs::path& final_path, const ImageBuf& img) {
    const fs::path tmp = final_path.string() + ".tmp";
    save_pfm(tmp, img);
    fs::rename(tmp, final_path);
}

struct SampleOutcome {
    bool ok = false;
    nlohmann::json row;
    std::string error;
};

/// Work queue of independent samples; outcomes land in index order
/// regardless of completion order.
std::vector<SampleOutcome> run_samples(int count, int workers,
                                       const std::function<nlohmann::json(int)>& job) {
    std::vector<SampleOutcome> outcomes(count);
    std::atomic<int> next{0};
    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= count) return;
            try {
                outcomes[i].row = job(i);
                outcomes[i].ok = true;
            } catch (const std::exception& e) {
                outcomes[i].error = e.what();
            }
        }
    };
    const int n_threads = std::max(1, std::min(workers, count));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(n_threads);
        for (int t = 0; t < n_threads; ++t) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }
    return outcomes;
}

RunResult collect(const std::vector<SampleOutcome>& outcomes, const fs::path& manifest_path,
                  const char* what) {
    RunResult result;
    result.requested = static_cast<int>(outcomes.size());
    result.manifest_path = manifest_path;
    std::vector<nlohmann::json> rows;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        if (outcomes[i].ok) {
            rows.push_back(outcomes[i].row);
            ++result.completed;
        } else {
            ++result.failed;
            result.failures.push_back("sample " + std::to_string(i) + ": " +
                                      outcomes[i].error);
            std::fprintf(stderr, "[umbra] %s sample %zu failed: %s\n", what, i,
                         outcomes[i].error.c_str());
        }
    }
    write_manifest(manifest_path, rows);
    return result;
}

}  // namespace

std::vector<FaceEntry> load_face_corpus(const fs::path& dir) {
    if (!fs::is_directory(dir))
        throw ConfigError("face corpus: not a directory: " + dir.string());

    std::vector<FaceEntry> entries;
    const fs::path index_path = dir / "faces.json";
    if (fs::exists(index_path)) {
        std::ifstream in(index_path);
        nlohmann::json doc;
        try {
            in >> doc;
            for (const auto& item : doc.at("images")) {
                if (!item.value("shadow_free", false)) continue;  // curation gate
                FaceEntry entry;
                entry.file = dir / item.at("file").get<std::string>();
                if (item.contains("crop")) {
                    const auto& c = item.at("crop");
                    entry.crop = FaceCrop{c.at("x").get<int>(), c.at("y").get<int>(),
                                          c.at("w").get<int>(), c.at("h").get<int>()};
                }
                entries.push_back(std::move(entry));
            }
        } catch (const nlohmann::json::exception& e) {
            throw DataError("face corpus: bad faces.json: " + std::string(e.what()));
        }
    } else {
        for (const auto& e : fs::directory_iterator(dir)) {
            if (e.path().extension() != ".png") continue;
            FaceEntry entry{e.path(), std::nullopt};
            // Per-image crop sidecar: <stem>.crop.json.
            const fs::path sidecar = e.path().parent_path() /
                                     (e.path().stem().string() + ".crop.json");
            if (fs::exists(sidecar)) entry.crop = load_crop_json(sidecar);
            entries.push_back(std::move(entry));
        }
        std::sort(entries.begin(), entries.end(),
                  [](const FaceEntry& a, const FaceEntry& b) { return a.file < b.file; });
    }
    if (entries.empty())
        throw DataError("face corpus: no usable images in " + dir.string());
    return entries;
}

LightRig resolve_rig(const PipelineConfig& cfg) {
    if (cfg.rig == "synthetic")
        return synthetic_rig(cfg.synthetic_light_count, cfg.synthetic_inactive_count);
    return load_rig_json(cfg.rig);
}

OlatScan resolve_scan(const PipelineConfig& cfg, const LightRig& rig) {
    if (cfg.scan == "synthetic")
        return synthetic_scan(rig, cfg.synthetic_scan_resolution);
    return load_scan(cfg.scan, rig);
}

RunResult gen_foreign(const PipelineConfig& cfg) {
    const std::vector<FaceEntry> faces = load_face_corpus(cfg.faces_dir);

    SilhouetteCorpus corpus;
    if (cfg.foreign.source_mode != MaskSourceMode::PerlinOnly) {
        if (cfg.silhouettes_dir.empty())
            throw ConfigError("gen_foreign: silhouettes_dir required unless "
                              "mask_source = \"perlin\"");
        if (!fs::is_directory(cfg.silhouettes_dir))
            throw ConfigError("gen_foreign: silhouettes_dir is not a directory: " +
                              cfg.silhouettes_dir.string());
        corpus = SilhouetteCorpus::load(cfg.silhouettes_dir);
        if (corpus.empty())
            throw DataError("gen_foreign: silhouette corpus is empty");
    }

    const fs::path out_dir = cfg.output_root / "foreign";
    fs::create_directories(out_dir);

    auto job = [&](int i) -> nlohmann::json {
        const std::uint64_t seed = derive_seed(cfg.master_seed, i, "foreign-sample");
        const FaceEntry& face = faces[i % faces.size()];

        const ImageBuf encoded = load_png(face.file);
        const FaceCrop crop =
            face.crop.value_or(FaceCrop{0, 0, encoded.width(), encoded.height()});
        const ImageBuf lit =
            resize_crop_face(srgb_to_linear(encoded), crop);

        const ForeignSample sample =
            synth_foreign(lit, seed, cfg.ablation, cfg.foreign,
                          corpus.empty() ? nullptr : &corpus);

        const std::string stem = sample_name(i);
        const std::string composite_rel = "foreign/" + stem + "_input.png";
        const std::string lit_rel = "foreign/" + stem + "_truth.png";
        const std::string mask_rel = "foreign/" + stem + "_mask.pfm";
        atomic_save_png16(cfg.output_root / composite_rel,
                          linear_to_srgb(sample.composite));
        atomic_save_png16(cfg.output_root / lit_rel, linear_to_srgb(sample.lit));
        atomic_save_pfm(cfg.output_root / mask_rel, sample.mask);

        return foreign_manifest_row(i, sample, face.file.filename().string(), crop,
                                    composite_rel, lit_rel, mask_rel);
    };

    const auto outcomes = run_samples(cfg.sample_count, cfg.workers, job);
    return collect(outcomes, cfg.output_root / "foreign_manifest.jsonl", "foreign");
}

RunResult gen_facial(const PipelineConfig& cfg) {
    const LightRig rig = resolve_rig(cfg);
    const OlatScan scan = resolve_scan(cfg, rig);
    scan.validate(rig);

    const fs::path out_dir = cfg.output_root / "facial";
    fs::create_directories(out_dir);

    auto job = [&](int i) -> nlohmann::json {
        const std::uint64_t seed = derive_seed(cfg.master_seed, i, "facial-sample");
        const FacialPair pair = make_pair(scan, rig, seed, cfg.facial);

        const std::string stem = sample_name(i);
        const std::string harsh_rel = "facial/" + stem + "_harsh.png";
        const std::string soft_rel = "facial/" + stem + "_soft.png";
        atomic_save_png16(cfg.output_root / harsh_rel, linear_to_srgb(pair.harsh));
        atomic_save_png16(cfg.output_root / soft_rel, linear_to_srgb(pair.soft));

        return facial_manifest_row(i, pair, harsh_rel, soft_rel);
    };

    const auto outcomes = run_samples(cfg.sample_count, cfg.workers, job);
    return collect(outcomes, cfg.output_root / "facial_manifest.jsonl", "facial");
}

RunResult gen_mirrors(const PipelineConfig& cfg) {
    if (!fs::is_directory(cfg.images_dir))
        throw ConfigError("gen_mirrors: images_dir is not a directory: " +
                          cfg.images_dir.string());
    if (!fs::is_directory(cfg.landmarks_dir))
        throw ConfigError("gen_mirrors: landmarks_dir is not a directory: " +
                          cfg.landmarks_dir.string());

    std::vector<fs::path> images;
    for (const auto& e : fs::directory_iterator(cfg.images_dir)) {
        if (e.path().extension() == ".png") images.push_back(e.path());
    }
    std::sort(images.begin(), images.end());
    if (images.empty())
        throw DataError("gen_mirrors: no PNG images in " + cfg.images_dir.string());

    const fs::path out_dir = cfg.output_root / "mirror";
    fs::create_directories(out_dir);

    auto job = [&](int i) -> nlohmann::json {
        const fs::path& image_path = images[i];
        const fs::path landmarks_path =
            cfg.landmarks_dir / (image_path.stem().string() + ".json");
        if (!fs::exists(landmarks_path))
            throw DataError("missing landmarks file " + landmarks_path.string());

        const LandmarkSet landmarks = load_landmarks_json(landmarks_path);
        const ImageBuf img = srgb_to_linear(load_png(image_path));
        landmarks.validate_bounds(img.width(), img.height());

        const ImageBuf mirrored = mirror_warp(img, landmarks, cfg.k_sigma);
        const std::string rel = "mirror/" + image_path.stem().string() + "_mirror.png";
        atomic_save_png16(cfg.output_root / rel, linear_to_srgb(mirrored));

        return mirror_manifest_row(i, image_path.filename().string(),
                                   landmarks_path.filename().string(),
                                   hash_file(landmarks_path), rel);
    };

    const auto outcomes =
        run_samples(static_cast<int>(images.size()), cfg.workers, job);
    return collect(outcomes, cfg.output_root / "mirror_manifest.jsonl", "mirror");
}

MetricSummary compute_metrics(const fs::path& pred_dir, const fs::path& truth_dir,
                              const std::string& name) {
    if (!fs::is_directory(truth_dir))
        throw DataError("metrics: truth dir not found: " + truth_dir.string());
    if (!fs::is_directory(pred_dir))
        throw DataError("metrics: prediction dir not found: " + pred_dir.string());

    std::vector<fs::path> truths;
    for (const auto& e : fs::directory_iterator(truth_dir)) {
        if (e.path().extension() == ".png") truths.push_back(e.path());
    }
    std::sort(truths.begin(), truths.end());
    if (truths.empty())
        throw DataError("metrics: no ground-truth PNGs in " + truth_dir.string());

    MetricSummary summary;
    summary.name = name;
    for (const auto& truth_path : truths) {
        const std::string id = truth_path.stem().string();
        const fs::path pred_path = pred_dir / truth_path.filename();
        if (!fs::exists(pred_path))
            throw DataError("metrics: missing prediction for id '" + id + "' (" +
                            pred_path.string() + ")");
        const ImageBuf truth = srgb_to_linear(load_png(truth_path));
        const ImageBuf pred = srgb_to_linear(load_png(pred_path));
        MetricRow row;
        row.id = id;
        row.psnr = psnr(pred, truth);
        row.ssim = ssim(pred, truth);
        row.l1 = l1_pixel(pred, truth);
        summary.rows.push_back(row);
    }

    for (const MetricRow& row : summary.rows) {
        summary.mean_psnr += row.psnr;
        summary.mean_ssim += row.ssim;
        summary.mean_l1 += row.l1;
    }
    const double n = static_cast<double>(summary.rows.size());
    summary.mean_psnr /= n;
    summary.mean_ssim /= n;
    summary.mean_l1 /= n;
    return summary;
}

std::string render_metrics_table(const std::vector<MetricSummary>& summaries) {
    std::ostringstream out;
    out << std::left << std::setw(24) << "variant" << std::right << std::setw(10) << "PSNR"
        << std::setw(10) << "SSIM" << std::setw(12) << "L1" << std::setw(8) << "n" << "\n";
    out << std::string(64, '-') << "\n";
    for (const auto& s : summaries) {
        out << std::left << std::setw(24) << s.name << std::right << std::fixed
            << std::setprecision(3) << std::setw(10) << s.mean_psnr << std::setw(10)
            << s.mean_ssim << std::setw(12) << std::setprecision(5) << s.mean_l1
            << std::setw(8) << s.rows.size() << "\n";
    }
    return out.str();
}

nlohmann::json metrics_report_json(const std::vector<MetricSummary>& summaries,
                                   bool include_rows) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& s : summaries) {
        nlohmann::json entry{{"variant", s.name},
                             {"psnr", s.mean_psnr},
                             {"ssim", s.mean_ssim},
                             {"l1", s.mean_l1},
                             {"count", s.rows.size()}};
        if (include_rows) {
            nlohmann::json images = nlohmann::json::array();
            for (const auto& r : s.rows) {
                images.push_back(
                    {{"id", r.id}, {"psnr", r.psnr}, {"ssim", r.ssim}, {"l1", r.l1}});
            }
            entry["images"] = images;
        }
        rows.push_back(entry);
    }
    return nlohmann::json{{"rows", rows}};
}

}  // namespace umbra
