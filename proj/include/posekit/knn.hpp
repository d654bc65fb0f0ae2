#pragma once

#include <algorithm>
#include <numeric>
#include <span>
#include <vector>

#include "posekit/distance.hpp"

namespace posekit {

template <typename Scalar>
struct Neighbor {
  std::size_t index = 0;
  Scalar distance{};

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Exact k nearest neighbours of `query` among prepared candidate coordinates,
/// ascending by distance, ties broken by smaller index.
template <typename Scalar>
std::vector<Neighbor<Scalar>> knn_query(const PoseCoords<Scalar>& query,
                                        std::span<const PoseCoords<Scalar>> candidates,
                                        std::size_t k) {
  if (candidates.empty()) throw EmptyCandidates();
  if (k < 1 || k > candidates.size()) {
    throw InvalidArgument("k=" + std::to_string(k) + " outside [1, " +
                          std::to_string(candidates.size()) + "]");
  }

  std::vector<Neighbor<Scalar>> all(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    all[i] = {i, coords_distance<Scalar>(query, candidates[i])};
  }
  const auto closer = [](const Neighbor<Scalar>& a, const Neighbor<Scalar>& b) {
    return a.distance < b.distance || (a.distance == b.distance && a.index < b.index);
  };
  if (k == 1) {
    return {*std::min_element(all.begin(), all.end(), closer)};
  }
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end(), closer);
  all.resize(k);
  return all;
}

template <typename Scalar>
std::vector<Neighbor<Scalar>> knn_query(const PoseFrameT<Scalar>& query, FrameDims query_dims,
                                        const PoseSequenceT<Scalar>& candidates, std::size_t k,
                                        bool normalize = true) {
  if (candidates.empty()) throw EmptyCandidates();
  const auto prepared = pose_matrix(candidates, normalize);
  return knn_query<Scalar>(distance_coords(query, query_dims, normalize),
                           std::span<const PoseCoords<Scalar>>(prepared), k);
}

}  // namespace posekit
