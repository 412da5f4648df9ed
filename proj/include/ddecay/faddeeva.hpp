#pragma once

#include "ddecay/types.hpp"

namespace dd {

// Faddeeva function w(z) = e^{-z^2} erfc(-iz).
// Weideman's rational expansion (40 terms) in the upper half plane, reflection below.
cplx faddeeva_w(cplx z);

}  // namespace dd
