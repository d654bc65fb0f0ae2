#pragma once

#include <bitset>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "posekit/errors.hpp"

namespace posekit {

inline constexpr int kNumJoints = 18;

// COCO-18 keypoint layout.
enum class Coco : int {
  Nose = 0,
  Neck,
  RShoulder,
  RElbow,
  RWrist,
  LShoulder,
  LElbow,
  LWrist,
  RHip,
  RKnee,
  RAnkle,
  LHip,
  LKnee,
  LAnkle,
  REye,
  LEye,
  REar,
  LEar,
};

constexpr int index(Coco j) noexcept { return static_cast<int>(j); }

struct FrameDims {
  int width = 0;
  int height = 0;

  friend bool operator==(const FrameDims&, const FrameDims&) = default;
};

template <typename Scalar>
struct JointT {
  Scalar x{};
  Scalar y{};
  Scalar confidence{};

  friend bool operator==(const JointT&, const JointT&) = default;
};

/// One frame of the pose matrix: 18 optional joints. Coordinates are kept in
/// an 18x2 Eigen block (column 0 = x, column 1 = y); absence is tracked by an
/// explicit mask, so an absent joint never reads as (0,0).
template <typename Scalar>
class PoseFrameT {
 public:
  using Coords = Eigen::Matrix<Scalar, kNumJoints, 2>;
  using Confidences = Eigen::Matrix<Scalar, kNumJoints, 1>;

  PoseFrameT() : coords_(Coords::Zero()), confidence_(Confidences::Zero()) {}

  bool has(int j) const { return present_.test(check(j)); }
  bool complete() const noexcept { return present_.all(); }
  bool empty() const noexcept { return present_.none(); }
  std::size_t count() const noexcept { return present_.count(); }

  std::optional<JointT<Scalar>> joint(int j) const {
    if (!has(j)) return std::nullopt;
    return JointT<Scalar>{coords_(j, 0), coords_(j, 1), confidence_(j)};
  }

  void set(int j, const JointT<Scalar>& v) {
    check(j);
    coords_(j, 0) = v.x;
    coords_(j, 1) = v.y;
    confidence_(j) = v.confidence;
    present_.set(j);
  }

  void clear(int j) {
    check(j);
    coords_.row(j).setZero();
    confidence_(j) = Scalar(0);
    present_.reset(j);
  }

  // Raw coordinate block. Rows of absent joints are zero and meaningless.
  const Coords& coords() const noexcept { return coords_; }
  const Confidences& confidence() const noexcept { return confidence_; }

  friend bool operator==(const PoseFrameT& a, const PoseFrameT& b) {
    if (a.present_ != b.present_) return false;
    for (int j = 0; j < kNumJoints; ++j) {
      if (a.present_.test(j) && a.joint(j) != b.joint(j)) return false;
    }
    return true;
  }

 private:
  static int check(int j) {
    if (j < 0 || j >= kNumJoints) {
      throw InvalidArgument("joint index " + std::to_string(j) + " out of range");
    }
    return j;
  }

  Coords coords_;
  Confidences confidence_;
  std::bitset<kNumJoints> present_;
};

/// The 18x2xT pose tensor of one video, stored frame by frame in temporal
/// order.
template <typename Scalar>
struct PoseSequenceT {
  std::vector<PoseFrameT<Scalar>> frames;
  FrameDims dims;
  std::string source_id;

  std::size_t size() const noexcept { return frames.size(); }
  bool empty() const noexcept { return frames.empty(); }
  const PoseFrameT<Scalar>& operator[](std::size_t t) const { return frames[t]; }

  friend bool operator==(const PoseSequenceT&, const PoseSequenceT&) = default;
};

enum class CandidatePolicy {
  MinDistance,       // closest of the k neighbours
  NearestPrevIndex,  // of the k neighbours, the one closest in time to the held frame
};

struct MatchParams {
  std::size_t k = 1;
  double lambda = 0.0;
  bool normalize = true;
  CandidatePolicy candidate_policy = CandidatePolicy::NearestPrevIndex;

  void validate() const {
    if (k < 1) throw InvalidArgument("k must be at least 1");
    if (!(lambda >= 0.0)) throw InvalidArgument("lambda must be non-negative");
  }

  friend bool operator==(const MatchParams&, const MatchParams&) = default;
};

using Joint = JointT<double>;
using PoseFrame = PoseFrameT<double>;
using PoseSequence = PoseSequenceT<double>;

}  // namespace posekit
