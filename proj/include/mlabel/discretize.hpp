#pragma once

#include <cstdint>
#include <vector>

namespace mlabel {

// Supervised entropy-minimization discretization with the MDL stopping
// criterion (Fayyad & Irani). Cut candidates are the midpoints between
// adjacent distinct values; a binary split is kept only when its gain beats
// the MDL cost, recursing on both halves.
std::vector<double> mdl_cut_points(const std::vector<double>& values,
                                   const std::vector<std::uint8_t>& classes);

// Bin index for a value under an ordered cut list: values <= cuts[i] fall
// left, so bin = count of cuts strictly below the value. Values beyond the
// outermost cuts land in the boundary bins.
std::uint32_t apply_cuts(const std::vector<double>& cuts, double value);

}  // namespace mlabel
