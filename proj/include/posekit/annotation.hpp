#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "posekit/pose.hpp"
#include "posekit/raster.hpp"

namespace posekit {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kSchemaVersion = "posekit/1";

using Keypoint = std::array<double, 3>;  // x, y, confidence

struct AnnotationFrame {
  std::int64_t frame_index = 0;
  std::array<Keypoint, kNumJoints> keypoints{};
  std::optional<FaceAnnotation> face;

  friend bool operator==(const AnnotationFrame&, const AnnotationFrame&) = default;
};

/// Canonical per-video annotation file: header metadata plus one record of
/// 18 [x, y, confidence] keypoints (and an optional face) per frame.
struct AnnotationDocument {
  std::string version{kSchemaVersion};
  std::string source_id;
  int width = 0;
  int height = 0;
  std::vector<AnnotationFrame> frames;

  friend bool operator==(const AnnotationDocument&, const AnnotationDocument&) = default;
};

// Strict: unknown keys, wrong arity, bad ranges and non-increasing
// frame_index all raise SchemaError naming the offending JSON path.
AnnotationDocument parse_annotation(const Json& j);
Json to_json(const AnnotationDocument& doc);

AnnotationDocument read_annotation(const std::filesystem::path& path);
void write_annotation(const std::filesystem::path& path, const AnnotationDocument& doc);

struct LoadedSequence {
  PoseSequence poses;
  std::vector<std::optional<FaceAnnotation>> faces;
  std::size_t clamped = 0;  // coordinates pulled back into the frame
};

/// Converts a document into a pose sequence. Keypoints with confidence 0 or
/// at exactly (0,0) become absent joints; everything else is clamped to
/// [0, width] x [0, height]. Face contours are clamped the same way.
LoadedSequence load_pose_sequence(const AnnotationDocument& doc);

/// Inverse of load_pose_sequence: absent joints are written as [0, 0, 0] and
/// frames are numbered by position.
AnnotationDocument to_document(const PoseSequence& seq,
                               const std::vector<std::optional<FaceAnnotation>>& faces = {});

}  // namespace posekit
