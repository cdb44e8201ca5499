#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "umbra/foreign.hpp"
#include "umbra/olat.hpp"

namespace umbra {

inline constexpr const char* kPipelineVersion = "1.0.0";

/// One JSON Lines record per sample; file paths are relative to the output
/// root so reruns into different roots stay byte-identical.
nlohmann::json foreign_manifest_row(int id, const ForeignSample& sample,
                                    const std::string& face_file, const FaceCrop& crop,
                                    const std::string& composite_path,
                                    const std::string& lit_path,
                                    const std::string& mask_path);

nlohmann::json facial_manifest_row(int id, const FacialPair& pair,
                                   const std::string& harsh_path,
                                   const std::string& soft_path);

nlohmann::json mirror_manifest_row(int id, const std::string& image_file,
                                   const std::string& landmarks_file,
                                   std::uint64_t landmarks_hash,
                                   const std::string& output_path);

/// Write rows in id order, one JSON document per line.
void write_manifest(const std::filesystem::path& path,
                    const std::vector<nlohmann::json>& rows);

std::vector<nlohmann::json> read_manifest(const std::filesystem::path& path);

/// FNV-1a of a file's bytes; recorded so a manifest pins its inputs.
std::uint64_t hash_file(const std::filesystem::path& path);

}  // namespace umbra
