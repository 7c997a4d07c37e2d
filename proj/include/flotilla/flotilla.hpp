#pragma once

// Convenience umbrella for the whole library.

#include "flotilla/error.hpp"
#include "flotilla/geo.hpp"
#include "flotilla/guidance.hpp"
#include "flotilla/landing.hpp"
#include "flotilla/radio.hpp"
#include "flotilla/relay.hpp"
#include "flotilla/rng.hpp"
#include "flotilla/scenario.hpp"
#include "flotilla/sim.hpp"
#include "flotilla/trace.hpp"
#include "flotilla/tracker.hpp"
#include "flotilla/vessel.hpp"
