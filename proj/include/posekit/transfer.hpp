#pragma once

#include <cmath>
#include <cstdlib>
#include <optional>
#include <span>
#include <vector>

#include "posekit/knn.hpp"
#include "posekit/parallel.hpp"

namespace posekit {

template <typename Scalar>
struct Selection {
  std::size_t index = 0;
  Scalar distance{};
  bool switched = false;

  friend bool operator==(const Selection&, const Selection&) = default;
};

template <typename Scalar>
struct MappingEntryT {
  std::size_t a_index = 0;
  std::size_t b_index = 0;
  Scalar distance{};
  bool switched = false;

  friend bool operator==(const MappingEntryT&, const MappingEntryT&) = default;
};

/// For each frame of A, the frame of B shown in the transferred video.
template <typename Scalar>
struct FrameMappingT {
  std::vector<MappingEntryT<Scalar>> entries;

  std::size_t size() const noexcept { return entries.size(); }
  bool empty() const noexcept { return entries.empty(); }
  std::size_t switches() const noexcept {
    std::size_t n = 0;
    for (std::size_t t = 1; t < entries.size(); ++t) {
      if (entries[t].b_index != entries[t - 1].b_index) ++n;
    }
    return n;
  }

  friend bool operator==(const FrameMappingT&, const FrameMappingT&) = default;
};

template <typename Scalar>
struct PairT {
  std::size_t a_index = 0;
  std::size_t b_index = 0;
  Scalar distance{};

  friend bool operator==(const PairT&, const PairT&) = default;
};

/// Index of matched (A frame, B frame) training pairs.
template <typename Scalar>
struct PairManifestT {
  std::vector<PairT<Scalar>> pairs;
  MatchParams params;
  std::optional<double> max_distance;

  friend bool operator==(const PairManifestT&, const PairManifestT&) = default;
};

namespace detail {

template <typename Scalar>
std::size_t pick_candidate(const std::vector<Neighbor<Scalar>>& neighbors, std::size_t prev_b,
                           CandidatePolicy policy) {
  if (policy == CandidatePolicy::MinDistance) return 0;
  const auto gap = [prev_b](std::size_t i) { return i > prev_b ? i - prev_b : prev_b - i; };
  std::size_t best = 0;
  for (std::size_t c = 1; c < neighbors.size(); ++c) {
    const auto& n = neighbors[c];
    const auto& b = neighbors[best];
    const std::size_t gn = gap(n.index), gb = gap(b.index);
    if (gn < gb || (gn == gb && (n.distance < b.distance ||
                                 (n.distance == b.distance && n.index < b.index)))) {
      best = c;
    }
  }
  return best;
}

}  // namespace detail

/// Thresholded frame selection on prepared coordinates: B-hat is taken over
/// the held frame only if it improves the distance by more than lambda.
template <typename Scalar>
Selection<Scalar> select_frame(std::size_t prev_b, const PoseCoords<Scalar>& query,
                               std::span<const PoseCoords<Scalar>> candidates,
                               const MatchParams& params) {
  if (candidates.empty()) throw EmptyCandidates();
  if (prev_b >= candidates.size()) throw InvalidArgument("prev_b out of range");
  params.validate();

  const std::size_t k = std::min(params.k, candidates.size());
  const auto neighbors = knn_query<Scalar>(query, candidates, k);
  const auto& proposal =
      neighbors[detail::pick_candidate(neighbors, prev_b, params.candidate_policy)];

  const Scalar held = coords_distance<Scalar>(query, candidates[prev_b]);
  if (proposal.distance < held - static_cast<Scalar>(params.lambda)) {
    return {proposal.index, proposal.distance, proposal.index != prev_b};
  }
  return {prev_b, held, false};
}

template <typename Scalar>
Selection<Scalar> select_frame(std::size_t prev_b, const PoseFrameT<Scalar>& query,
                               FrameDims query_dims, const PoseSequenceT<Scalar>& candidates,
                               const MatchParams& params) {
  if (candidates.empty()) throw EmptyCandidates();
  const auto prepared = pose_matrix(candidates, params.normalize);
  return select_frame<Scalar>(prev_b, distance_coords(query, query_dims, params.normalize),
                              std::span<const PoseCoords<Scalar>>(prepared), params);
}

/// Transfers A onto B frame by frame. Entry 0 is the plain nearest neighbour
/// of A's first frame; every later entry applies select_frame to the previous
/// choice. Both inputs must already be imputed.
template <typename Scalar>
FrameMappingT<Scalar> match_sequence(const PoseSequenceT<Scalar>& a,
                                     const PoseSequenceT<Scalar>& b, const MatchParams& params) {
  if (a.empty()) throw EmptySequence("A");
  if (b.empty()) throw EmptySequence("B");
  params.validate();

  const auto a_coords = pose_matrix(a, params.normalize);
  const auto b_coords = pose_matrix(b, params.normalize);
  const std::span<const PoseCoords<Scalar>> candidates(b_coords);

  FrameMappingT<Scalar> mapping;
  mapping.entries.reserve(a.size());
  const auto first = knn_query<Scalar>(a_coords[0], candidates, 1).front();
  mapping.entries.push_back({0, first.index, first.distance, false});

  for (std::size_t t = 1; t < a.size(); ++t) {
    const auto sel = select_frame<Scalar>(mapping.entries.back().b_index, a_coords[t],
                                          candidates, params);
    mapping.entries.push_back({t, sel.index, sel.distance, sel.switched});
  }
  return mapping;
}

/// Nearest B frame for every A frame (k = 1 regardless of params.k), kept
/// when within max_distance. Work is split across `threads` workers.
template <typename Scalar>
PairManifestT<Scalar> build_pairs_manifest(const PoseSequenceT<Scalar>& a,
                                           const PoseSequenceT<Scalar>& b,
                                           const MatchParams& params,
                                           std::optional<double> max_distance,
                                           std::size_t threads = 1) {
  if (a.empty()) throw EmptySequence("A");
  if (b.empty()) throw EmptySequence("B");
  params.validate();
  if (max_distance && !(*max_distance >= 0.0)) {
    throw InvalidArgument("max_distance must be non-negative");
  }

  const auto a_coords = pose_matrix(a, params.normalize);
  const auto b_coords = pose_matrix(b, params.normalize);
  const std::span<const PoseCoords<Scalar>> candidates(b_coords);

  std::vector<Neighbor<Scalar>> nearest(a.size());
  parallel_for(a.size(), threads, [&](std::size_t i) {
    nearest[i] = knn_query<Scalar>(a_coords[i], candidates, 1).front();
  });

  // One pair per A frame, so (a, b) is unique by construction.
  PairManifestT<Scalar> manifest;
  manifest.params = params;
  manifest.max_distance = max_distance;
  for (std::size_t i = 0; i < nearest.size(); ++i) {
    if (max_distance && !(nearest[i].distance <= static_cast<Scalar>(*max_distance))) continue;
    manifest.pairs.push_back({i, nearest[i].index, nearest[i].distance});
  }
  return manifest;
}

enum class RenderKind { Real, Blend };

struct RenderInstruction {
  RenderKind kind = RenderKind::Real;
  std::size_t b_left = 0;
  std::size_t b_right = 0;
  double alpha = 0.0;  // blend weight of b_right; 0 for real frames

  friend bool operator==(const RenderInstruction&, const RenderInstruction&) = default;
};

/// Expands a mapping into output frames: every entry as a real frame, with
/// factor-1 evenly spaced blends inserted wherever the B frame changes.
template <typename Scalar>
std::vector<RenderInstruction> interpolate_plan(const FrameMappingT<Scalar>& mapping,
                                                std::size_t factor) {
  if (mapping.empty()) throw InvalidArgument("mapping is empty");
  if (factor < 1) throw InvalidArgument("interpolation factor must be at least 1");

  std::vector<RenderInstruction> plan;
  plan.reserve(mapping.size() + (factor - 1) * mapping.switches());
  for (std::size_t t = 0; t < mapping.size(); ++t) {
    const std::size_t cur = mapping.entries[t].b_index;
    if (t > 0) {
      const std::size_t prev = mapping.entries[t - 1].b_index;
      if (prev != cur) {
        for (std::size_t m = 1; m < factor; ++m) {
          plan.push_back({RenderKind::Blend, prev, cur,
                          static_cast<double>(m) / static_cast<double>(factor)});
        }
      }
    }
    plan.push_back({RenderKind::Real, cur, cur, 0.0});
  }
  return plan;
}

/// Pose-space counterpart of a crossfade: joints present in both frames are
/// interpolated linearly; a joint present in only one frame is taken from it
/// when that frame carries at least half the weight.
template <typename Scalar>
PoseFrameT<Scalar> interpolate_pose(const PoseFrameT<Scalar>& left,
                                    const PoseFrameT<Scalar>& right, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidArgument("alpha outside [0,1]");
  const auto w = static_cast<Scalar>(alpha);
  PoseFrameT<Scalar> out;
  for (int j = 0; j < kNumJoints; ++j) {
    const auto l = left.joint(j);
    const auto r = right.joint(j);
    if (l && r) {
      out.set(j, {l->x + w * (r->x - l->x), l->y + w * (r->y - l->y),
                  l->confidence + w * (r->confidence - l->confidence)});
    } else if (l && alpha < 0.5) {
      out.set(j, *l);
    } else if (r && alpha >= 0.5) {
      out.set(j, *r);
    }
  }
  return out;
}

using MappingEntry = MappingEntryT<double>;
using FrameMapping = FrameMappingT<double>;
using Pair = PairT<double>;
using PairManifest = PairManifestT<double>;

}  // namespace posekit
