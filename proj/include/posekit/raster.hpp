#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "posekit/pose.hpp"

namespace posekit {

enum class Channel : int { R = 0, G = 1, B = 2 };

using Plane = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// width x height x 3 byte raster, one row-major plane per channel, origin
/// top-left. Planes are indexed (y, x).
class RasterImage {
 public:
  RasterImage() = default;
  RasterImage(int width, int height);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  FrameDims dims() const noexcept { return {width_, height_}; }

  Plane& plane(Channel c) { return planes_[static_cast<int>(c)]; }
  const Plane& plane(Channel c) const { return planes_[static_cast<int>(c)]; }

  std::uint8_t& at(Channel c, int x, int y) { return plane(c)(y, x); }
  std::uint8_t at(Channel c, int x, int y) const { return plane(c)(y, x); }

  friend bool operator==(const RasterImage& a, const RasterImage& b);

 private:
  int width_ = 0;
  int height_ = 0;
  std::array<Plane, 3> planes_;
};

using Point = Eigen::Vector2d;

struct BBox {
  double left = 0, top = 0, right = 0, bottom = 0;

  friend bool operator==(const BBox&, const BBox&) = default;
};

struct Contour {
  std::string name;
  std::vector<Point> points;

  friend bool operator==(const Contour& a, const Contour& b) {
    return a.name == b.name && a.points == b.points;
  }
};

struct FaceAnnotation {
  BBox bbox;
  std::vector<Contour> contours;  // jawline, eyebrows, nose bridge, eyes, lips...

  friend bool operator==(const FaceAnnotation&, const FaceAnnotation&) = default;
};

using Limb = std::pair<int, int>;

/// The 17 bones of the COCO-18 skeleton.
const std::vector<Limb>& coco_limbs();

struct SkeletonStyle {
  std::vector<Limb> limb_pairs = coco_limbs();
  int joint_radius = 4;
  int line_thickness = 4;
  int face_thickness = 2;
  Channel skeleton_channel = Channel::R;
  Channel face_channel = Channel::G;
  Channel reserved_channel = Channel::B;

  // Defaults (4 px joints and bones, 2 px face contours) are tuned for a
  // 512 px tall frame and scale linearly with the height, never below 1 px.
  static SkeletonStyle for_height(int height);

  void validate() const;
};

// Drawing primitives. Geometry outside the plane is dropped.
void draw_disc(Plane& plane, double cx, double cy, double radius, std::uint8_t value = 255);
void draw_line(Plane& plane, double x0, double y0, double x1, double y1, int thickness,
               std::uint8_t value = 255);

/// Skeleton joints and bones go to style.skeleton_channel, face contours to
/// style.face_channel; the reserved channel stays zero. Bones with an absent
/// endpoint are skipped.
RasterImage render_skeleton(const PoseFrame& pose, const FaceAnnotation* face, FrameDims dims,
                            const SkeletonStyle& style);

inline RasterImage render_skeleton(const PoseFrame& pose, const std::optional<FaceAnnotation>& face,
                                   FrameDims dims, const SkeletonStyle& style) {
  return render_skeleton(pose, face ? &*face : nullptr, dims, style);
}

Point face_center(const FaceAnnotation& face);

/// Shifts content by (dx, dy); exposed margins repeat the nearest edge
/// row/column: out(x, y) = in(clamp(x - dx), clamp(y - dy)).
RasterImage translate_edge_replicate(const RasterImage& img, int dx, int dy);

/// Integer shift bringing each face center onto the first one.
std::vector<Eigen::Vector2i> alignment_offsets(const std::vector<FaceAnnotation>& faces);

std::vector<RasterImage> align_sequence(const std::vector<RasterImage>& frames,
                                        const std::vector<FaceAnnotation>& faces,
                                        std::size_t threads = 1);

/// Per-sample crossfade round((1 - alpha) a + alpha b).
RasterImage blend_frames(const RasterImage& a, const RasterImage& b, double alpha);

}  // namespace posekit
