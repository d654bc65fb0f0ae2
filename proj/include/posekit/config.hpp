#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>

#include "posekit/annotation.hpp"
#include "posekit/pose.hpp"
#include "posekit/raster.hpp"

namespace posekit {

/// Flat pipeline settings. Every field is optional; unset fields fall back
/// to the library defaults (k=1, lambda=0, normalize on, nearest_prev_index,
/// no distance cutoff, interpolation factor 1, style scaled to frame height).
struct PipelineConfig {
  std::optional<std::size_t> k;
  std::optional<double> lambda;
  std::optional<bool> normalize;
  std::optional<CandidatePolicy> candidate_policy;
  std::optional<double> max_distance;
  std::optional<std::size_t> interpolation_factor;
  std::optional<int> joint_radius;
  std::optional<int> line_thickness;
  std::optional<int> face_thickness;

  /// Fields set in `overrides` replace ours.
  void merge(const PipelineConfig& overrides);

  MatchParams match_params() const;
  SkeletonStyle style(int frame_height) const;
  std::size_t interpolation() const { return interpolation_factor.value_or(1); }

  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

// Rejects unknown keys and ill-typed values with SchemaError.
PipelineConfig parse_config(const Json& j);
PipelineConfig read_config(const std::filesystem::path& path);

}  // namespace posekit
