#ifndef VASC_IO_HPP
#define VASC_IO_HPP

#include <filesystem>
#include <string>

#include "vasc/volume.hpp"

namespace vasc {

/// Volume container: a JSON header
///   {"dims":[nx,ny,nz], "spacing_um":[sx,sy,sz], "dtype":"u8"|"u16"|"f32",
///    "data":"<relative path>"}
/// next to a raw little-endian binary file in x-fastest index order.
/// Masks use dtype u8 with values {0,1}.

/// Reads a volume through its header file. Throws UnsupportedFormat for bad
/// headers / dtypes and CorruptData when the data length does not match.
Volume3D read_volume(const std::filesystem::path& header_path);

/// Writes the header at `header_path` and the raw data alongside it
/// (same stem, ".raw"). dtype must be "u8", "u16" or "f32"; values are cast.
void write_volume(const Volume3D& vol, const std::filesystem::path& header_path,
                  const std::string& dtype = "f32");

BinaryMask read_mask(const std::filesystem::path& header_path);
void write_mask(const BinaryMask& mask, const std::filesystem::path& header_path);

/// SHA-256 of a file, lowercase hex (for run-manifest provenance).
std::string sha256_file(const std::filesystem::path& path);

} // namespace vasc

#endif
