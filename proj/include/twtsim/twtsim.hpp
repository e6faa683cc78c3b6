#pragma once

// Umbrella header for the TWT uplink scheduling library.

#include "twtsim/assignment.hpp"
#include "twtsim/channel.hpp"
#include "twtsim/core.hpp"
#include "twtsim/experiment.hpp"
#include "twtsim/grouping.hpp"
#include "twtsim/json_io.hpp"
#include "twtsim/phy.hpp"
#include "twtsim/queueing.hpp"
#include "twtsim/ra.hpp"
#include "twtsim/rng.hpp"
#include "twtsim/sim.hpp"
#include "twtsim/traffic.hpp"
#include "twtsim/util.hpp"
