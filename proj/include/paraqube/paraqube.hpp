#pragma once

// Umbrella header: the full pipeline from generator catalog through QUBO
// encoding, solvers, decoding, observables, file formats, and benchmarking.

#include "paraqube/bench.hpp"
#include "paraqube/clock.hpp"
#include "paraqube/io.hpp"
#include "paraqube/models.hpp"
#include "paraqube/numerics.hpp"
#include "paraqube/observables.hpp"
#include "paraqube/qubo.hpp"
#include "paraqube/solvers.hpp"
