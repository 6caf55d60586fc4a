#pragma once

// Umbrella header: block-sampled approximate matrix multiplication, the two
// straggler-tolerant coded variants, the worker-trace simulator, and the
// experiment drivers.

#include "crmm/error.hpp"
#include "crmm/experiment.hpp"
#include "crmm/gc.hpp"
#include "crmm/io.hpp"
#include "crmm/matdot.hpp"
#include "crmm/matrix.hpp"
#include "crmm/numeric.hpp"
#include "crmm/partition.hpp"
#include "crmm/rng.hpp"
#include "crmm/sampling.hpp"
#include "crmm/sim.hpp"
#include "crmm/sketch.hpp"
