#pragma once

#include <filesystem>

#include "umbra/image.hpp"

namespace umbra {

/// Load a PNG (8- or 16-bit; gray, palette and alpha variants are expanded
/// to RGB). Returns the encoded samples scaled to [0,1]; no transfer
/// function is applied. Throws DataError on malformed files.
ImageBuf load_png(const std::filesystem::path& path);

/// Write an 8- or 16-bit RGB PNG from encoded [0,1] samples.
/// Values are clamped and quantized with round-to-nearest.
void save_png8(const std::filesystem::path& path, const ImageBuf& encoded);
void save_png16(const std::filesystem::path& path, const ImageBuf& encoded);

/// PFM float image, scale -1.0 (little-endian), scanlines bottom-up.
/// 3-channel buffers use "PF", 1-channel use "Pf". Round-trips are
/// bit-exact.
ImageBuf load_pfm(const std::filesystem::path& path);
void save_pfm(const std::filesystem::path& path, const ImageBuf& img);

/// Crop sidecar: JSON document {"x":..,"y":..,"w":..,"h":..}.
FaceCrop load_crop_json(const std::filesystem::path& path);
void save_crop_json(const std::filesystem::path& path, const FaceCrop& crop);

}  // namespace umbra
