#include "umbra/manifest.hpp"

#include <fstream>
#include <sstream>

#include "umbra/error.hpp"

namespace umbra {

namespace {

nlohmann::json perlin_json(const PerlinSpec& spec) {
    return {{"seed", spec.seed},
            {"octaves", spec.octaves},
            {"persistence", spec.persistence},
            {"initial_amplitude", spec.initial_amplitude},
            {"base_frequency", spec.base_frequency}};
}

nlohmann::json silhouette_json(const SilhouetteSpec& spec) {
    return {{"seed", spec.seed},
            {"silhouette_id", spec.silhouette_id},
            {"scale", spec.scale},
            {"tile_period", spec.tile_period},
            {"rotation", spec.rotation},
            {"phase_x", spec.phase_x},
            {"phase_y", spec.phase_y}};
}

nlohmann::json ccm_json(const Mat3& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (int r = 0; r < 3; ++r) rows.push_back({m[r][0], m[r][1], m[r][2]});
    return rows;
}

}  // namespace

nlohmann::json foreign_manifest_row(int id, const ForeignSample& sample,
                                    const std::string& face_file, const FaceCrop& crop,
                                    const std::string& composite_path,
                                    const std::string& lit_path,
                                    const std::string& mask_path) {
    const ForeignProvenance& prov = sample.provenance;
    nlohmann::json row{
        {"id", id},
        {"kind", "foreign"},
        {"pipeline_version", kPipelineVersion},
        {"seed", prov.seed},
        {"face", face_file},
        {"crop", {{"x", crop.x}, {"y", crop.y}, {"w", crop.w}, {"h", crop.h}}},
        {"ablation",
         {{"no_sv", prov.ablation.no_sv},
          {"no_ss", prov.ablation.no_ss},
          {"no_color", prov.ablation.no_color}}},
        {"mask_source", to_string(prov.mask_source)},
        {"ccm", ccm_json(prov.ccm)},
        {"outputs",
         {{"composite", composite_path}, {"lit", lit_path}, {"mask", mask_path}}}};
    if (prov.perlin_spec) row["perlin"] = perlin_json(*prov.perlin_spec);
    if (prov.silhouette_spec) row["silhouette"] = silhouette_json(*prov.silhouette_spec);
    if (prov.sv_blur_spec) {
        row["spatial_variation"] = {
            {"blur", perlin_json(*prov.sv_blur_spec)},
            {"intensity", perlin_json(*prov.sv_intensity_spec)},
            {"sigma_min", prov.spatial.sigma_min},
            {"sigma_max", prov.spatial.sigma_max},
            {"intensity_floor", prov.spatial.intensity_floor}};
    }
    return row;
}

nlohmann::json facial_manifest_row(int id, const FacialPair& pair,
                                   const std::string& harsh_path,
                                   const std::string& soft_path) {
    return {{"id", id},
            {"kind", "facial"},
            {"pipeline_version", kPipelineVersion},
            {"seed", pair.seed},
            {"key_index", pair.key_index},
            {"p_key", pair.p_key},
            {"m", pair.m},
            {"p_fill", pair.p_fill},
            {"epsilon", pair.eps},
            {"outputs", {{"harsh", harsh_path}, {"soft", soft_path}}}};
}

nlohmann::json mirror_manifest_row(int id, const std::string& image_file,
                                   const std::string& landmarks_file,
                                   std::uint64_t landmarks_hash,
                                   const std::string& output_path) {
    std::ostringstream hash;
    hash << "fnv1a64:" << std::hex << landmarks_hash;
    return {{"id", id},
            {"kind", "mirror"},
            {"pipeline_version", kPipelineVersion},
            {"image", image_file},
            {"landmarks", landmarks_file},
            {"landmarks_hash", hash.str()},
            {"outputs", {{"mirror", output_path}}}};
}

void write_manifest(const std::filesystem::path& path,
                    const std::vector<nlohmann::json>& rows) {
    std::ofstream out(path);
    if (!out) throw DataError("write_manifest: cannot open " + path.string());
    for (const auto& row : rows) out << row.dump() << "\n";
    if (!out) throw DataError("write_manifest: write failed for " + path.string());
}

std::vector<nlohmann::json> read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("read_manifest: cannot open " + path.string());
    std::vector<nlohmann::json> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        try {
            rows.push_back(nlohmann::json::parse(line));
        } catch (const nlohmann::json::exception& e) {
            throw DataError("read_manifest: bad row " + std::to_string(rows.size()) + ": " +
                            e.what());
        }
    }
    return rows;
}

std::uint64_t hash_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("hash_file: cannot open " + path.string());
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[4096];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        const std::streamsize n = in.gcount();
        for (std::streamsize i = 0; i < n; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
        if (!in) break;
    }
    return h;
}

}  // namespace umbra
