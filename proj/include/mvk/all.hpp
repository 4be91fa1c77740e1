#ifndef MVK_ALL_HPP
#define MVK_ALL_HPP

// Everything except mvk/io.hpp, which needs the vendored nlohmann json.

#include "mvk/basis.hpp"
#include "mvk/birth_death.hpp"
#include "mvk/combinatorics.hpp"
#include "mvk/composition.hpp"
#include "mvk/error.hpp"
#include "mvk/linalg.hpp"
#include "mvk/multivariate.hpp"
#include "mvk/polys.hpp"
#include "mvk/quadrature.hpp"
#include "mvk/scalar.hpp"
#include "mvk/series.hpp"
#include "mvk/sim.hpp"
#include "mvk/spectral.hpp"
#include "mvk/verify.hpp"

#endif  // MVK_ALL_HPP
