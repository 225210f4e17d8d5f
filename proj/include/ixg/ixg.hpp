#pragma once

// Everything: geometry, graphs, trajectory optimization, LBG, search, harness.

#include "ixg/errors.hpp"
#include "ixg/generators.hpp"
#include "ixg/gcs_graph.hpp"
#include "ixg/geometry/convex_set.hpp"
#include "ixg/geometry/lp.hpp"
#include "ixg/harness/bench.hpp"
#include "ixg/harness/oracle.hpp"
#include "ixg/harness/scenario.hpp"
#include "ixg/harness/svg.hpp"
#include "ixg/lbg.hpp"
#include "ixg/search.hpp"
#include "ixg/trajopt/conic.hpp"
#include "ixg/trajopt/sequence.hpp"
#include "ixg/trajopt/trajectory.hpp"
