#pragma once

#include "qgraph/spectral.hpp"

namespace qgraph {

// Removes values above `limit`; returns the number of levels removed.
long drop_roots_above(Spectrum& s, double limit);

}  // namespace qgraph
