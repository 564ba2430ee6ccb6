#pragma once

#include "infx/grid.hpp"

namespace infx {

/// Value stored for nodes the sweep never reaches.
inline constexpr double unreachable_distance = 1e300;

/// Shortest-path distance from `source` on the 8-neighbour lattice graph.
///
/// The edge P-Q has length |(M^T)^{-1} (Q - P)| with M the entrywise average of
/// A(P) and A(Q), i.e. the length of the straight segment measured in the
/// metric that makes the frame orthonormal.
ScalarField riemannian_distance(const FrameField& frame, NodeIndex source);

/// Length of the lattice edge between two adjacent nodes.
double edge_length(const FrameField& frame, NodeIndex p, NodeIndex q);

}  // namespace infx
