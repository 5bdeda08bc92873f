#pragma once

// Umbrella header.

#include "catalog.hpp"
#include "errors.hpp"
#include "expr.hpp"
#include "geometry.hpp"
#include "io.hpp"
#include "jet.hpp"
#include "oracle.hpp"
#include "quadrature.hpp"
#include "residual.hpp"
#include "sample.hpp"
#include "vec3.hpp"
#include "weierstrass.hpp"
