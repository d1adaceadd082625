#pragma once

#include <cstdint>
#include <vector>

#include "lunet/slice.hpp"

namespace lunet {

struct ClusterConfig {
  int k = 2;
  int max_iters = 100;
  double tol = 1e-6;       // convergence: max center shift
  double fuzzifier = 2.0;  // fuzzy c-means m
  uint64_t seed = 0;

  void validate() const;
};

struct ClusterResult {
  SliceImage mask;  // foreground = brightest-center cluster
  std::vector<double> centers;
  int iterations = 0;
  bool degenerate = false;  // fewer distinct intensities than k
};

// Lloyd's algorithm on pixel intensities with k-means++ style seeding. The
// within-cluster sum of squares is checked to be non-increasing on every
// iteration. Images with fewer distinct values than k run with the reduced
// k; a single distinct value yields an all-background mask.
ClusterResult kmeans_segment(const SliceImage& img, const ClusterConfig& cfg);

// Standard fuzzy c-means: memberships u_ic proportional to
// (1/d_ic^2)^(1/(m-1)), centers = sum(u^m x)/sum(u^m); a pixel coincident
// with a center gets full membership there. Defuzzified by max membership.
// The FCM objective is checked to be non-increasing on every iteration.
ClusterResult fuzzy_cmeans_segment(const SliceImage& img, const ClusterConfig& cfg);

}  // namespace lunet
