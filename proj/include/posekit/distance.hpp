#pragma once

#include <span>
#include <vector>

#include "posekit/pose.hpp"

namespace posekit {

template <typename Scalar>
using PoseCoords = typename PoseFrameT<Scalar>::Coords;

/// Coordinates of a fully populated frame, optionally divided by the frame
/// size (x / width, y / height). Throws MissingJoint on an absent joint.
template <typename Scalar>
PoseCoords<Scalar> distance_coords(const PoseFrameT<Scalar>& frame, FrameDims dims,
                                   bool normalize) {
  if (!frame.complete()) {
    for (int j = 0; j < kNumJoints; ++j) {
      if (!frame.has(j)) throw MissingJoint(j);
    }
  }
  PoseCoords<Scalar> c = frame.coords();
  if (normalize) {
    if (dims.width <= 0 || dims.height <= 0) {
      throw InvalidArgument("normalization needs positive frame dimensions");
    }
    c.col(0) /= static_cast<Scalar>(dims.width);
    c.col(1) /= static_cast<Scalar>(dims.height);
  }
  return c;
}

/// The pose matrix of a whole sequence in distance space, one 18x2 block per
/// frame.
template <typename Scalar>
std::vector<PoseCoords<Scalar>> pose_matrix(const PoseSequenceT<Scalar>& seq, bool normalize) {
  std::vector<PoseCoords<Scalar>> out;
  out.reserve(seq.size());
  for (const auto& frame : seq.frames) out.push_back(distance_coords(frame, seq.dims, normalize));
  return out;
}

// Euclidean norm of the 36-vector difference. Every distance in the library
// goes through this, so prepared and ad-hoc paths agree bit for bit.
template <typename Scalar>
Scalar coords_distance(const PoseCoords<Scalar>& a, const PoseCoords<Scalar>& b) {
  return (a - b).norm();
}

template <typename Scalar>
Scalar pose_distance(const PoseFrameT<Scalar>& a, const PoseFrameT<Scalar>& b, bool normalize,
                     FrameDims dims_a, FrameDims dims_b) {
  return coords_distance<Scalar>(distance_coords(a, dims_a, normalize),
                                 distance_coords(b, dims_b, normalize));
}

// Raw pixel distance; both frames must be complete.
template <typename Scalar>
Scalar pose_distance(const PoseFrameT<Scalar>& a, const PoseFrameT<Scalar>& b) {
  return pose_distance(a, b, false, FrameDims{}, FrameDims{});
}

}  // namespace posekit
