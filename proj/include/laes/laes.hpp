#pragma once

// Umbrella header for the laes library: age-aware learning schedulers for
// slotted wireless networks, a reproducible simulation engine, and the
// matching closed-form performance bounds.

#include "laes/bounds.hpp"
#include "laes/config.hpp"
#include "laes/engine.hpp"
#include "laes/env.hpp"
#include "laes/learning.hpp"
#include "laes/network.hpp"
#include "laes/policy.hpp"
#include "laes/rng.hpp"
#include "laes/table.hpp"
#include "laes/version.hpp"
