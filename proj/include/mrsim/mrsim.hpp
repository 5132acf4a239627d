#pragma once

// Umbrella header for the whole simulator library.

#include "mrsim/analysis.hpp"
#include "mrsim/core.hpp"
#include "mrsim/event_engine.hpp"
#include "mrsim/hash.hpp"
#include "mrsim/machine.hpp"
#include "mrsim/pipeline.hpp"
#include "mrsim/remap.hpp"
#include "mrsim/sched_bsp.hpp"
#include "mrsim/sched_steal.hpp"
#include "mrsim/shuffle.hpp"
#include "mrsim/svg_plot.hpp"
#include "mrsim/types.hpp"
#include "mrsim/workload_io.hpp"
#include "mrsim/workloads.hpp"
