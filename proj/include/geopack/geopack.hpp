#pragma once

// Convenience umbrella: pulls in the whole library.

#include "geopack/core.hpp"
#include "geopack/rng.hpp"
#include "geopack/geometry.hpp"
#include "geopack/lp.hpp"
#include "geopack/rounding.hpp"
#include "geopack/oracle.hpp"
#include "geopack/rect.hpp"
#include "geopack/fattri.hpp"
#include "geopack/localsearch.hpp"
#include "geopack/generators.hpp"
#include "geopack/json_io.hpp"
