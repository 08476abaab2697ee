#pragma once

// Finite metric spaces, ultrametrics, and the nearest-neighbor extension of a
// subset ultrametric to the whole space with certified distortion bounds.

#include "umex/core.hpp"
#include "umex/extension.hpp"
#include "umex/io.hpp"
#include "umex/matrix.hpp"
#include "umex/metric.hpp"
#include "umex/tightness.hpp"
#include "umex/ultrametric.hpp"
