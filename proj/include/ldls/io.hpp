#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "ldls/types.hpp"

namespace ldls::io {

/// KITTI velodyne layout: packed little-endian float32 records (x, y, z, intensity).
PointCloud read_point_cloud(const std::filesystem::path& path);
void write_point_cloud(const PointCloud& cloud, const std::filesystem::path& path);

/// Reads a projection from calibration text. KITTI object files are composed
/// as P2 * R0_rect * Tr_velo_to_cam; files with a single `P:` key are taken
/// verbatim.
Matrix34 read_calibration(const std::filesystem::path& path);
Matrix34 parse_calibration(std::istream& in);

/// Mask documents are JSON with `width`, `height` and an `instances` array;
/// each mask is run-length encoded over row-major pixels, zeros first.
MaskSet read_masks(const std::filesystem::path& path);
void write_masks(const MaskSet& masks, const std::filesystem::path& path);
MaskSet parse_masks(std::istream& in);
void format_masks(const MaskSet& masks, std::ostream& out);

std::vector<std::size_t> encode_rle(std::span<const std::uint8_t> mask);
std::vector<std::uint8_t> decode_rle(std::span<const std::size_t> counts, std::size_t pixel_count);

/// One `instance_id,class_id` line per point after a `#`-prefixed header
/// holding the instance table and diagnostics.
void write_labels(const SegmentationResult& result, const std::filesystem::path& path);
SegmentationResult read_labels(const std::filesystem::path& path,
                               std::optional<std::size_t> expected_points = std::nullopt);
void format_labels(const SegmentationResult& result, std::ostream& out);
SegmentationResult parse_labels(std::istream& in,
                                std::optional<std::size_t> expected_points = std::nullopt);

}  // namespace ldls::io
