#include "posekit/raster.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "posekit/parallel.hpp"

namespace posekit {

RasterImage::RasterImage(int width, int height) : width_(width), height_(height) {
  if (width <= 0 || height <= 0) {
    throw InvalidArgument("raster dimensions must be positive, got " + std::to_string(width) +
                          "x" + std::to_string(height));
  }
  for (auto& p : planes_) p = Plane::Zero(height, width);
}

bool operator==(const RasterImage& a, const RasterImage& b) {
  if (a.width_ != b.width_ || a.height_ != b.height_) return false;
  for (int c = 0; c < 3; ++c) {
    if (a.planes_[c] != b.planes_[c]) return false;
  }
  return true;
}

const std::vector<Limb>& coco_limbs() {
  static const std::vector<Limb> limbs = {
      {0, 1},                                  // nose - neck
      {1, 2},   {1, 5},                        // neck - shoulders
      {2, 3},   {3, 4},                        // right arm
      {5, 6},   {6, 7},                        // left arm
      {1, 8},   {1, 11},                       // neck - hips
      {8, 9},   {9, 10},                       // right leg
      {11, 12}, {12, 13},                      // left leg
      {0, 14},  {0, 15},                       // nose - eyes
      {14, 16}, {15, 17},                      // eye - ear
  };
  return limbs;
}

SkeletonStyle SkeletonStyle::for_height(int height) {
  const auto scaled = [height](double px) {
    return std::max(1, static_cast<int>(std::lround(px * height / 512.0)));
  };
  SkeletonStyle s;
  s.joint_radius = scaled(4);
  s.line_thickness = scaled(4);
  s.face_thickness = scaled(2);
  return s;
}

void SkeletonStyle::validate() const {
  if (skeleton_channel == face_channel || skeleton_channel == reserved_channel ||
      face_channel == reserved_channel) {
    throw InvalidArgument("skeleton, face and reserved channels must be distinct");
  }
  if (joint_radius < 0 || line_thickness < 1 || face_thickness < 1) {
    throw InvalidArgument("stroke sizes must be positive");
  }
  for (const auto& [p, q] : limb_pairs) {
    if (p < 0 || p >= kNumJoints || q < 0 || q >= kNumJoints) {
      throw InvalidArgument("limb (" + std::to_string(p) + "," + std::to_string(q) +
                            ") references a joint outside [0,17]");
    }
  }
}

namespace {

void stamp_disc(Plane& plane, long cx, long cy, double radius, std::uint8_t value) {
  const long r = static_cast<long>(std::floor(radius));
  const double r2 = radius * radius;
  const long y0 = std::max(0L, cy - r), y1 = std::min<long>(plane.rows() - 1, cy + r);
  const long x0 = std::max(0L, cx - r), x1 = std::min<long>(plane.cols() - 1, cx + r);
  for (long y = y0; y <= y1; ++y) {
    for (long x = x0; x <= x1; ++x) {
      const double ddx = static_cast<double>(x - cx), ddy = static_cast<double>(y - cy);
      if (ddx * ddx + ddy * ddy <= r2) plane(y, x) = value;
    }
  }
}

// Liang-Barsky clip of a segment to [lo, hi] box; false when nothing remains.
bool clip_segment(double& x0, double& y0, double& x1, double& y1, double xlo, double ylo,
                  double xhi, double yhi) {
  double t0 = 0.0, t1 = 1.0;
  const double dx = x1 - x0, dy = y1 - y0;
  const double p[4] = {-dx, dx, -dy, dy};
  const double q[4] = {x0 - xlo, xhi - x0, y0 - ylo, yhi - y0};
  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0.0) {
      if (q[i] < 0.0) return false;
      continue;
    }
    const double t = q[i] / p[i];
    if (p[i] < 0.0) {
      if (t > t1) return false;
      t0 = std::max(t0, t);
    } else {
      if (t < t0) return false;
      t1 = std::min(t1, t);
    }
  }
  const double nx0 = x0 + t0 * dx, ny0 = y0 + t0 * dy;
  const double nx1 = x0 + t1 * dx, ny1 = y0 + t1 * dy;
  x0 = nx0, y0 = ny0, x1 = nx1, y1 = ny1;
  return true;
}

}  // namespace

void draw_disc(Plane& plane, double cx, double cy, double radius, std::uint8_t value) {
  if (!std::isfinite(cx) || !std::isfinite(cy)) return;
  const double margin = radius + 1.0;
  if (cx < -margin || cy < -margin || cx > plane.cols() - 1 + margin ||
      cy > plane.rows() - 1 + margin) {
    return;
  }
  stamp_disc(plane, std::lround(cx), std::lround(cy), radius, value);
}

void draw_line(Plane& plane, double x0, double y0, double x1, double y1, int thickness,
               std::uint8_t value) {
  if (!std::isfinite(x0) || !std::isfinite(y0) || !std::isfinite(x1) || !std::isfinite(y1)) {
    return;
  }
  const double radius = thickness / 2.0;
  const double m = radius + 1.0;
  if (!clip_segment(x0, y0, x1, y1, -m, -m, plane.cols() - 1 + m, plane.rows() - 1 + m)) return;

  long x = std::lround(x0), y = std::lround(y0);
  const long xe = std::lround(x1), ye = std::lround(y1);
  const long dx = std::labs(xe - x), dy = -std::labs(ye - y);
  const long sx = x < xe ? 1 : -1, sy = y < ye ? 1 : -1;
  long err = dx + dy;
  for (;;) {
    stamp_disc(plane, x, y, radius, value);
    if (x == xe && y == ye) break;
    const long e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y += sy;
    }
  }
}

RasterImage render_skeleton(const PoseFrame& pose, const FaceAnnotation* face, FrameDims dims,
                            const SkeletonStyle& style) {
  style.validate();
  RasterImage img(dims.width, dims.height);

  Plane& skeleton = img.plane(style.skeleton_channel);
  for (const auto& [p, q] : style.limb_pairs) {
    const auto a = pose.joint(p);
    const auto b = pose.joint(q);
    if (a && b) draw_line(skeleton, a->x, a->y, b->x, b->y, style.line_thickness);
  }
  for (int j = 0; j < kNumJoints; ++j) {
    if (const auto joint = pose.joint(j)) {
      draw_disc(skeleton, joint->x, joint->y, style.joint_radius);
    }
  }

  if (face != nullptr) {
    Plane& plane = img.plane(style.face_channel);
    for (const auto& contour : face->contours) {
      const auto& pts = contour.points;
      if (pts.size() == 1) {
        draw_disc(plane, pts[0].x(), pts[0].y(), style.face_thickness / 2.0);
      }
      for (std::size_t i = 1; i < pts.size(); ++i) {
        draw_line(plane, pts[i - 1].x(), pts[i - 1].y(), pts[i].x(), pts[i].y(),
                  style.face_thickness);
      }
    }
  }
  return img;
}

Point face_center(const FaceAnnotation& face) {
  return {(face.bbox.left + face.bbox.right) / 2.0, (face.bbox.top + face.bbox.bottom) / 2.0};
}

RasterImage translate_edge_replicate(const RasterImage& img, int dx, int dy) {
  const int w = img.width(), h = img.height();
  if (std::abs(dx) >= w) throw ShiftTooLarge(dx, w);
  if (std::abs(dy) >= h) throw ShiftTooLarge(dy, h);
  if (dx == 0 && dy == 0) return img;

  RasterImage out(w, h);
  for (int c = 0; c < 3; ++c) {
    const Plane& src = img.plane(static_cast<Channel>(c));
    Plane& dst = out.plane(static_cast<Channel>(c));
    for (int y = 0; y < h; ++y) {
      const int sy = std::clamp(y - dy, 0, h - 1);
      for (int x = 0; x < w; ++x) {
        dst(y, x) = src(sy, std::clamp(x - dx, 0, w - 1));
      }
    }
  }
  return out;
}

std::vector<Eigen::Vector2i> alignment_offsets(const std::vector<FaceAnnotation>& faces) {
  std::vector<Eigen::Vector2i> offsets;
  if (faces.empty()) return offsets;
  offsets.reserve(faces.size());
  const Point anchor = face_center(faces.front());
  for (const auto& face : faces) {
    const Point d = anchor - face_center(face);
    offsets.emplace_back(static_cast<int>(std::lround(d.x())),
                         static_cast<int>(std::lround(d.y())));
  }
  return offsets;
}

std::vector<RasterImage> align_sequence(const std::vector<RasterImage>& frames,
                                        const std::vector<FaceAnnotation>& faces,
                                        std::size_t threads) {
  if (frames.size() != faces.size()) {
    throw InvalidArgument("align_sequence needs one face per frame (" +
                          std::to_string(frames.size()) + " frames, " +
                          std::to_string(faces.size()) + " faces)");
  }
  for (const auto& f : frames) {
    if (f.dims() != frames.front().dims()) {
      throw DimensionMismatch("frames in an aligned sequence must share dimensions");
    }
  }

  const auto offsets = alignment_offsets(faces);
  std::vector<RasterImage> out(frames.size());
  parallel_for(frames.size(), threads, [&](std::size_t t) {
    out[t] = translate_edge_replicate(frames[t], offsets[t].x(), offsets[t].y());
  });
  return out;
}

RasterImage blend_frames(const RasterImage& a, const RasterImage& b, double alpha) {
  if (a.dims() != b.dims()) throw DimensionMismatch("blend_frames needs equal dimensions");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidArgument("alpha outside [0,1]");

  RasterImage out(a.width(), a.height());
  for (int c = 0; c < 3; ++c) {
    const auto ch = static_cast<Channel>(c);
    // a + alpha (b - a) keeps alpha = 0 / 1 exact and is monotone in alpha.
    const Eigen::ArrayXXd pa = a.plane(ch).cast<double>().array();
    const Eigen::ArrayXXd pb = b.plane(ch).cast<double>().array();
    out.plane(ch) = (pa + alpha * (pb - pa)).round().cast<std::uint8_t>().matrix();
  }
  return out;
}

}  // namespace posekit
