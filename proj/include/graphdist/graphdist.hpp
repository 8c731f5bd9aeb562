#pragma once

#include "graphdist/error.hpp"
#include "graphdist/geometry.hpp"
#include "graphdist/graph.hpp"
#include "graphdist/frechet.hpp"
#include "graphdist/placements.hpp"
#include "graphdist/decision.hpp"
#include "graphdist/optimize.hpp"
#include "graphdist/oracle.hpp"
#include "graphdist/io.hpp"
