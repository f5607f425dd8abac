#pragma once

#include "edgeseg/grid.hpp"

namespace edgeseg {

/// Response of the 3x3x3 filter with +26 at the centre and -1 elsewhere,
/// over a zero-padded label volume. Exact integer arithmetic.
ResponseVolume laplacian26_response(const LabelVolume& labels);

/// Keeps the label wherever the response is nonzero. Background never becomes an edge.
EdgeVolume reconstruct_edges(const LabelVolume& labels, const ResponseVolume& response);

/// reconstruct_edges(labels, laplacian26_response(labels)).
EdgeVolume extract_edges(const LabelVolume& labels);

/// Reference boundary: a labelled voxel with at least one 26-neighbour of a
/// different label, counting out-of-grid neighbours as 0. Unlike
/// extract_edges this has no cancellation blind spot (26*v == sum of neighbours).
EdgeVolume oracle_boundary(const LabelVolume& labels);

}  // namespace edgeseg
