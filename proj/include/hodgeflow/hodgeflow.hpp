#pragma once

// Umbrella header: weighted simplicial complexes, Hodge operators and
// decompositions, frustrated simplicial Kuramoto dynamics, trajectory
// diagnostics, parameter sweeps, and plain-file IO.

#include "hodgeflow/analysis.hpp"
#include "hodgeflow/complex.hpp"
#include "hodgeflow/delaunay.hpp"
#include "hodgeflow/dynamics.hpp"
#include "hodgeflow/errors.hpp"
#include "hodgeflow/hodge.hpp"
#include "hodgeflow/io.hpp"
#include "hodgeflow/operators.hpp"
#include "hodgeflow/plot.hpp"
#include "hodgeflow/rng.hpp"
#include "hodgeflow/sweep.hpp"
