#pragma once

#include <algorithm>
#include <array>
#include <vector>

#include "posekit/pose.hpp"

namespace posekit {

namespace detail {

// Median of a non-empty range; even counts average the two middle values.
template <typename Scalar>
Scalar median(std::vector<Scalar> values) {
  const std::size_t n = values.size();
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(values.begin(), mid, values.end());
  const Scalar hi = *mid;
  if (n % 2 == 1) return hi;
  const Scalar lo = *std::max_element(values.begin(), mid);
  return (lo + hi) / Scalar(2);
}

}  // namespace detail

/// Fills every absent joint with the componentwise median of that joint over
/// the frames where it was observed. Imputed joints get confidence 0; observed
/// joints are untouched. Throws JointNeverObserved if some joint is absent in
/// every frame, and EmptySequence for a sequence without frames.
template <typename Scalar>
PoseSequenceT<Scalar> impute_missing_joints(const PoseSequenceT<Scalar>& seq) {
  if (seq.empty()) throw EmptySequence(seq.source_id.empty() ? "<unnamed>" : seq.source_id);

  PoseSequenceT<Scalar> out = seq;
  std::vector<Scalar> xs, ys;
  xs.reserve(seq.size());
  ys.reserve(seq.size());

  for (int j = 0; j < kNumJoints; ++j) {
    xs.clear();
    ys.clear();
    bool any_missing = false;
    for (const auto& frame : seq.frames) {
      if (auto joint = frame.joint(j)) {
        xs.push_back(joint->x);
        ys.push_back(joint->y);
      } else {
        any_missing = true;
      }
    }
    if (!any_missing) continue;
    if (xs.empty()) throw JointNeverObserved(j);

    const JointT<Scalar> fill{detail::median(xs), detail::median(ys), Scalar(0)};
    for (auto& frame : out.frames) {
      if (!frame.has(j)) frame.set(j, fill);
    }
  }
  return out;
}

}  // namespace posekit
